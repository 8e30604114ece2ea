import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from moprh.mxcore import (
    DimensionError,
    LaurentBlock,
    MatrixPoly,
    SingularMatrixError,
    TruncationError,
    anticommutator,
    commutator,
    det,
    inv,
    miura,
    norm,
    positive_part,
    series_inverse,
    solve_linear,
    to_double,
    to_extended,
)

E01 = np.array([[0, 1], [0, 0]], dtype=complex)
E00 = np.array([[1, 0], [0, 0]], dtype=complex)

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def cmats(n=2):
    return st.tuples(arrays(float, (n, n), elements=finite), arrays(float, (n, n), elements=finite)).map(
        lambda ri: ri[0] + 1j * ri[1])


def test_commutator_examples():
    B = np.array([[1, 2], [3, 4]], dtype=complex)
    assert norm(commutator(B, B)) == 0
    assert norm(commutator(np.eye(2), B)) == 0
    np.testing.assert_array_equal(commutator(E01, E00), [[0, -1], [0, 0]])


def test_anticommutator_examples():
    B = np.array([[1, 2], [3, 4]], dtype=complex)
    assert norm(anticommutator(B, np.zeros((2, 2)))) == 0
    np.testing.assert_array_equal(anticommutator(np.eye(2), B), 2 * B)
    np.testing.assert_array_equal(anticommutator(E01, E00), [[0, 1], [0, 0]])


@given(cmats(), cmats(), cmats(), finite)
def test_commutator_antisymmetric_and_bilinear(A, B, C, s):
    assert norm(commutator(A, B) + commutator(B, A)) < 1e-12
    lhs = commutator(s * A + C, B)
    rhs = s * commutator(A, B) + commutator(C, B)
    assert norm(lhs - rhs) <= 1e-13 * max(1.0, norm(lhs))


def test_miura_examples():
    zero = MatrixPoly(np.zeros((1, 2, 2), complex))
    assert miura(zero).max_coeff_norm() == 0
    B = np.array([[1, 2], [0, 3]], dtype=complex)
    np.testing.assert_allclose(miura(MatrixPoly.constant(B)).coefficient(0), B @ B)


@given(cmats(), cmats())
def test_miura_linear(A, B):
    m = miura(MatrixPoly.from_list([B, A]))
    np.testing.assert_allclose(m.coefficient(2), A @ A, atol=1e-12)
    np.testing.assert_allclose(m.coefficient(1), A @ B + B @ A, atol=1e-12)
    np.testing.assert_allclose(m.coefficient(0), A + B @ B, atol=1e-12)


@given(cmats(), cmats(), cmats(), st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_poly_product_evaluates_pointwise(a, b, c, z):
    p = MatrixPoly.from_list([a, b])
    q = MatrixPoly.from_list([c, a, b])
    np.testing.assert_allclose((p @ q)(z), p(z) @ q(z), atol=1e-10 * (1 + norm(p(z)) * norm(q(z))))


def test_poly_eval_and_derivative():
    p = MatrixPoly.from_list([1, 2, 3])
    assert complex(p(2.0)[0, 0]) == 17
    assert complex(p.derivative()(2.0)[0, 0]) == 14
    assert complex(p.derivative(2)(5.0)[0, 0]) == 6


def test_series_inverse_identity_and_neumann():
    I = np.eye(2, dtype=complex)
    s = LaurentBlock(I[None], np.zeros((0, 2, 2)), np.inf)
    inv_s = series_inverse(s, 4)
    np.testing.assert_allclose(inv_s.coefficient(0), I)
    assert max(norm(inv_s.coefficient(-k)) for k in range(1, 5)) == 0
    A = np.array([[0.3, 1], [0.2, -0.5]], dtype=complex)
    s = LaurentBlock(I[None], A[None], np.inf)
    inv_s = series_inverse(s, 5)
    for k in range(1, 6):
        np.testing.assert_allclose(inv_s.coefficient(-k), np.linalg.matrix_power(-A, k), atol=1e-14)


@given(cmats(), cmats(), cmats())
def test_series_inverse_product_is_identity(S1, S2, S3):
    I = np.eye(2, dtype=complex)
    K = 6
    s = LaurentBlock(I[None], np.stack([S1, S2, S3]) / 4, np.inf)
    prod = s @ series_inverse(s, K)
    np.testing.assert_allclose(prod.coefficient(0), I, atol=1e-12)
    for k in range(1, K + 1):
        assert norm(prod.coefficient(-k)) < 1e-10


def test_series_inverse_rejects_non_identity_head():
    with pytest.raises(TruncationError):
        series_inverse(LaurentBlock(2 * np.eye(2)[None], np.zeros((0, 2, 2))), 3)


def test_laurent_product_matches_exact():
    rng = np.random.default_rng(1)
    a = LaurentBlock(rng.standard_normal((2, 2, 2)), rng.standard_normal((3, 2, 2)), np.inf)
    b = LaurentBlock(rng.standard_normal((1, 2, 2)), rng.standard_normal((2, 2, 2)), np.inf)
    z = 1.7 - 0.4j
    np.testing.assert_allclose((a @ b)(z), a(z) @ b(z), atol=1e-12)


def test_positive_part():
    A, B, C = (np.full((1, 1), v, complex) for v in (2, 3, 5))
    s = LaurentBlock(np.stack([B, A]), C[None], np.inf)
    p = positive_part(s)
    assert p.degree == 1 and complex(p.coefficient(1)[0, 0]) == 2 and complex(p.coefficient(0)[0, 0]) == 3
    neg_only = LaurentBlock(np.zeros((1, 1, 1)), C[None], np.inf)
    assert positive_part(neg_only).max_coeff_norm() == 0


def test_solve_linear_examples():
    b = np.array([1.0, 2.0])
    np.testing.assert_allclose(solve_linear(np.eye(2), b).x, b)
    np.testing.assert_allclose(solve_linear(np.diag([2.0, 4.0]), [2.0, 4.0]).x, [1, 1])
    rng = np.random.default_rng(3)
    A = rng.standard_normal((6, 6)) + 6 * np.eye(6)
    r = solve_linear(A, rng.standard_normal(6))
    assert r.residual < 1e-12


def test_solve_linear_singular_and_shape():
    with pytest.raises(SingularMatrixError):
        solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), [1.0, 1.0])
    with pytest.raises(DimensionError):
        solve_linear(np.eye(2), np.ones(3))


@given(cmats(3))
def test_inverse_roundtrip(A):
    A = A + 8 * np.eye(3)
    assert norm(inv(A) @ A - np.eye(3)) < 1e-12


def test_extended_inverse_and_det():
    A = to_extended(np.array([[2.0, 1.0], [1.0, 3.0]]))
    Ai = inv(A)
    assert norm(to_double(Ai @ A) - np.eye(2)) < 1e-25
    assert abs(complex(to_double(np.array(det(A)))) - 5) < 1e-25
