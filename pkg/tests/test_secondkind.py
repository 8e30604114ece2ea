import math

import numpy as np
import pytest
from scipy.special import wofz

from moprh.contour import ContourError
from moprh.mxcore import norm, to_double
from moprh.secondkind import SecondKind, richardson


@pytest.fixture(scope="module")
def sk(gauss):
    return SecondKind(gauss.data, gauss.weight, gauss.rule)


@pytest.fixture(scope="module")
def sk_plain(gauss_plain):
    return SecondKind(gauss_plain.data, gauss_plain.weight, gauss_plain.rule)


def test_stieltjes_faddeeva_oracle(sk_plain):
    # int exp(-x^2) / (x - z) dx = i pi w(z) for Im z > 0
    for z in (2j, 0.5 + 1j, -1.3 + 0.4j):
        assert abs(complex(sk_plain.stieltjes(z)[0, 0]) - 1j * math.pi * wofz(z)) < 1e-8


def test_lower_half_plane_oracle(sk_plain):
    z = 0.7 - 1.1j
    assert abs(complex(sk_plain.stieltjes(z)[0, 0]) - np.conj(1j * math.pi * wofz(np.conj(z)))) < 1e-8


def test_large_z_asymptotics(sk):
    d = sk.data
    z = 50j
    W0 = complex(to_double(d.moments[0])[0, 0])
    assert abs(complex(sk.Q(0, z)[0, 0]) + W0 / z) < 1e-3 * abs(W0 / z)
    for n in (1, 2, 3):
        lead = -complex(to_double(d.C_inv(n))[0, 0]) * z ** (-n - 1)
        assert abs(complex(sk.Q(n, z)[0, 0]) - lead) < 1e-2 * abs(lead)


def test_series_matches_quadrature_far_out(mh2):
    s = SecondKind(mh2.data, mh2.weight, mh2.rule)
    for z in (20j, -18 + 6j):
        for n in range(4):
            q, qs = s.Q(n, z), s.Q_series(n, z)
            assert norm(q - qs) < 1e-6 * norm(q)


def test_zero_density_gives_zero(sk):
    nodal = np.zeros((sk.rule.size, 1, 1), complex)
    assert norm(sk.cauchy(nodal, lambda t: np.zeros((np.size(t), 1, 1)), 1 + 1j)) == 0


def test_jump(sk, mh2):
    assert sk.jump_residual(1, 0.3) < 1e-5
    assert sk.jump_residual(1, 0.3, "R") < 1e-5
    s = SecondKind(mh2.data, mh2.weight, mh2.rule)
    assert s.jump_residual(2, 0.3) < 1e-4
    assert s.jump_residual(2, -0.45, "R") < 1e-4


def test_associated_first_kind(sk_plain):
    from moprh.biorth import associated_first_kind

    A = associated_first_kind(sk_plain.data, 1)
    assert A.degree == 0 and abs(complex(A.coeffs[0, 0, 0]) - math.sqrt(math.pi)) < 1e-12
    assert associated_first_kind(sk_plain.data, 0).max_coeff_norm() == 0


def test_hermite_pade(sk, mh2):
    assert sk.hermite_pade_residual(0, 1 + 2j) == 0
    assert sk.hermite_pade_residual(2, 1 + 2j) < 1e-8
    s = SecondKind(mh2.data, mh2.weight, mh2.rule)
    for side in ("L", "R"):
        assert s.hermite_pade_residual(3, -0.5 + 1.5j, side) < 1e-8


def test_q_recurrence(mh2):
    s = SecondKind(mh2.data, mh2.weight, mh2.rule)
    for n in range(5):
        for side in ("L", "R"):
            assert s.recurrence_residual(n, 0.4 + 1.2j, side) < 1e-9


def test_clearance_guard(sk):
    with pytest.raises(ContourError):
        sk.Q(1, 0.3 + 0.01j)


def test_richardson_removes_linear_error():
    eps = (1e-2, 5e-3, 2.5e-3)
    vals = [2.0 + 3 * e + 5 * e * e for e in eps]
    assert abs(richardson(vals, eps) - 2.0) < 1e-12
