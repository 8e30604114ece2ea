import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moprh import odesys
from moprh.mxcore import MatrixPoly
from moprh.odesys import NotHermiteClassError
from moprh.pipeline import build, pearson

from conftest import I2

ZS = (1 + 1j, -0.7 + 1.4j, 3j)
MH2_ALPHA = np.diag([-2.0, 0.0])


def test_sylvester_scalar_gaussian(gauss_frames):
    F = gauss_frames
    assert F.Y(2, 1 + 1j).shape == (2, 2)
    for side in "LR":
        assert odesys.sylvester_matrix_residual(F, 2, 1 + 1j, side) < 1e-8
    r = odesys.split_sylvester_residuals(F, 2, 3j)
    assert max(v for k, v in r.items() if "Q" in k) < 1e-6


@pytest.mark.parametrize("n", range(6))
def test_sylvester_matrix_case(mh2_frames, n):
    for z in ZS:
        assert odesys.sylvester_matrix_residual(mh2_frames, n, z, "L") < 1e-7
        assert odesys.sylvester_matrix_residual(mh2_frames, n, z, "R") < 1e-7
        assert max(odesys.split_sylvester_residuals(mh2_frames, n, z).values()) < 1e-7


def test_sylvester_plus_sign_on_q_fails(mh2_frames):
    r = odesys.split_sylvester_residuals(mh2_frames, 2, 3j, printed_q_sign=True)
    assert max(v for k, v in r.items() if "P" in k) < 1e-8
    assert max(v for k, v in r.items() if "Q" in k) > 1e-2


def test_second_order(gauss_frames, mh2_frames):
    assert odesys.second_order_matrix_residual(gauss_frames, 1, 1 + 1j) < 1e-9
    for side in "LR":
        assert odesys.second_order_matrix_residual(mh2_frames, 2, 1 + 1j, side) < 1e-6
    assert max(odesys.split_second_order_residuals(mh2_frames, 2, 1 + 1j).values()) < 1e-6


def test_second_order_needs_C(mh2_frames):
    r = odesys.split_second_order_residuals(mh2_frames, 2, 1 + 1j, drop_C=True)
    assert r["second order P left"] > 1e-2


def test_adjoint_constants(gauss):
    one = MatrixPoly.from_list([1.0])
    assert odesys.adjoint_residual(gauss.spec, gauss.data.moments, one, one) < 1e-10
    zero = MatrixPoly.from_list([0.0])
    assert odesys.adjoint_residual(gauss.spec, gauss.data.moments, zero, one) == 0


@settings(max_examples=15)
@given(st.integers(0, 2 ** 31 - 1))
def test_adjoint_random_cubic(mh2, seed):
    rng = np.random.default_rng(seed)
    P = MatrixPoly(rng.standard_normal((4, 2, 2)) + 0j)
    Q = MatrixPoly(rng.standard_normal((4, 2, 2)) + 0j)
    assert odesys.adjoint_residual(mh2.spec, mh2.data.moments, P, Q) < 1e-7


def test_alpha_constraint(gauss, mh2, diag_hermite):
    pts = (0.3, 1.1, -0.7)
    assert odesys.alpha_constraint_residual(gauss.weight, 0.5 * np.eye(1), 0.5 * np.eye(1), pts) < 1e-12
    assert odesys.alpha_constraint_residual(mh2.weight, MH2_ALPHA, MH2_ALPHA, pts) < 1e-8
    aD = np.diag([0.0, 1.0])
    assert odesys.alpha_constraint_residual(diag_hermite.weight, aD, aD, pts) < 1e-8
    # mismatched alpha is detected
    assert odesys.alpha_constraint_residual(mh2.weight, np.zeros((2, 2)), np.zeros((2, 2)), pts) > 1e-2


def test_alpha_weight_equations(mh2):
    r = odesys.alpha_weight_residuals(mh2.weight, MH2_ALPHA, MH2_ALPHA, (0.3, -0.8))
    assert max(r.values()) < 1e-6


@pytest.mark.parametrize("n", range(9))
def test_scalar_eigenvalues(gauss_frames, n):
    ev = odesys.eigen_extract(gauss_frames, n, [[0]], [[0]])
    assert abs(complex(ev.lamL[0, 0]) + 2 * n) < 1e-9
    assert ev.residual_left < 1e-9 and ev.residual_right < 1e-9


def test_lambda_zero_is_alpha(mh2_frames):
    ev = odesys.eigen_extract(mh2_frames, 0, MH2_ALPHA, MH2_ALPHA)
    np.testing.assert_allclose(ev.lamL, MH2_ALPHA, atol=1e-12)


def test_matrix_eigenvalues(mh2_frames):
    for n in range(7):
        ev = odesys.eigen_extract(mh2_frames, n, MH2_ALPHA, MH2_ALPHA)
        np.testing.assert_allclose(ev.lamL, np.diag([-2.0 - 2 * n, -2.0 * n]), atol=1e-9)
        np.testing.assert_allclose(ev.lamL, odesys.lambda_hermite(n, -I2, MH2_ALPHA), atol=1e-9)
        assert max(ev.residual_left, ev.residual_right, ev.intertwining) < 1e-8


def test_diagonal_matches_scalars(diag_hermite):
    F = diag_hermite.frames()
    a = np.diag([0.0, 1.0])
    for n in range(5):
        ev = odesys.eigen_extract(F, n, a, a)
        np.testing.assert_allclose(ev.lamL, np.diag([-2.0 * n, -4.0 * n + 1]), atol=1e-8)


def test_cross_adjoint(mh2_frames):
    for n in range(4):
        for m in range(4):
            assert odesys.cross_adjoint_residual(mh2_frames, n, m, MH2_ALPHA, MH2_ALPHA) < 1e-7


def test_second_kind_eigen(mh2_frames):
    for n in range(4):
        r = odesys.second_kind_eigen_residuals(mh2_frames, n, 1 + 1j, MH2_ALPHA, MH2_ALPHA)
        assert max(r.values()) < 1e-6
    wrong = odesys.second_kind_eigen_residuals(mh2_frames, 2, 1 + 1j, MH2_ALPHA, MH2_ALPHA, sign=+1)
    assert max(wrong.values()) > 1e-2


def test_not_hermite_class(freud_frames):
    with pytest.raises(NotHermiteClassError):
        odesys.eigen_extract(freud_frames, 1, [[0]], [[0]])
    growing = build(pearson([0, -1], [0, -1]), 3, T=9.0)
    growing_spec = pearson([0, 1], [0, 1])
    with pytest.raises(NotHermiteClassError):
        odesys.hermite_class(growing_spec)
    assert odesys.hermite_class(growing.spec)[0] is not None
