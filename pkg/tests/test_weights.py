import math

import numpy as np
import pytest

from moprh.biorth import recurrence
from moprh.contour import Contour, build_rule
from moprh.mxcore import MatrixPoly, MoprhError, norm
from moprh.pipeline import pearson
from moprh.weights import (
    PearsonSpec,
    default_truncation,
    factor_orbit_shift,
    moments,
    pearson_residual,
    second_order_weight_residual,
    second_order_weight_residual_right,
    symmetry_residual,
    weight_eval,
)

from conftest import A_NIL, I2, mh2_spec

REAL = Contour("real-line", 8.0)


def test_scalar_gaussian_value():
    w = weight_eval(pearson([0, -1], [0, -1]), REAL)
    assert w.method == "closed-form"
    assert abs(complex(w.at_z(1.0)[0, 0]) - math.exp(-1)) < 1e-15
    w = weight_eval(pearson([0, -0.5], [0, -0.5]), REAL)
    assert abs(complex(w.at_z(1.0)[0, 0]) - math.exp(-0.5)) < 1e-15


def test_constant_weight():
    w = weight_eval(pearson([np.zeros((2, 2))], [np.zeros((2, 2))]), REAL)
    np.testing.assert_allclose(w.at_t(np.array([-3.0, 0.0, 2.0])), np.broadcast_to(I2, (3, 2, 2)))


def test_decoupled_diagonal():
    w = weight_eval(pearson([np.zeros((2, 2)), np.diag([-1.0, -2.0])]), REAL)
    np.testing.assert_allclose(w.at_z(1.0), np.diag([math.exp(-0.5), math.exp(-1)]), atol=1e-15)


def test_pearson_residual_closed_form():
    w = weight_eval(pearson([0, -1], [0, -1]), REAL)
    assert pearson_residual(w, 0.7) < 1e-13
    assert pearson_residual(w, 0.7, method="cauchy") < 1e-10


def test_pearson_residual_noncommuting_rk():
    spec = PearsonSpec(MatrixPoly.from_list([A_NIL, np.diag([-1.0, -2.0])]),
                       MatrixPoly.from_list([np.zeros((2, 2))]))
    w = weight_eval(spec, REAL)
    assert w.method == "rk"
    assert pearson_residual(w, 0.7, method="cauchy") < 1e-10


def test_pearson_residual_detects_corruption():
    w = weight_eval(pearson([0, -1], [0, -1]), REAL)
    W = w.at_z(np.array(0.7))
    assert pearson_residual(w, 0.7, override=1.01 * W) > 1e-3


def test_second_order_weight_equations():
    w = weight_eval(mh2_spec(), REAL)
    for z in (0.3, -0.8 + 0.2j):
        assert second_order_weight_residual(w, z) < 1e-8
        assert second_order_weight_residual_right(w, z) < 1e-8


def test_orbit_shift_identity_and_scalar():
    spec = mh2_spec()
    same = factor_orbit_shift(spec, np.eye(2))
    np.testing.assert_array_equal(same.WL0, spec.WL0)
    shifted = factor_orbit_shift(spec, 3.0)
    np.testing.assert_allclose(shifted.WL0, 3 * spec.WL0)
    t = np.linspace(-2, 2, 7)
    np.testing.assert_allclose(weight_eval(shifted, REAL).at_t(t), weight_eval(spec, REAL).at_t(t), atol=1e-14)


def test_orbit_shift_constant_matrix_preserves_downstream():
    spec = mh2_spec()
    phi = np.array([[2.0, 1.0], [0.5, 1.5]])
    shifted = factor_orbit_shift(spec, phi)
    t = np.linspace(-3, 3, 11)
    w0, w1 = weight_eval(spec, REAL), weight_eval(shifted, REAL)
    assert np.max(np.abs(w0.at_t(t) - w1.at_t(t))) < 1e-12
    r = build_rule(REAL)
    d0 = recurrence(moments(w0, r, 18), 5)
    d1 = recurrence(moments(w1, r, 18), 5)
    for n in range(6):
        assert norm(d0.C(n) - d1.C(n)) <= 1e-9 * norm(d0.C(n))
        assert norm(d0.beta(n) - d1.beta(n)) < 1e-9


def test_orbit_shift_rejects_bad_phi():
    with pytest.raises(MoprhError):
        factor_orbit_shift(mh2_spec(), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        factor_orbit_shift(mh2_spec(), lambda z: (1 + z) * np.eye(2))


def test_symmetric_reduction():
    # h^R = (h^L)^T with WR0 = WL0^T gives a symmetric weight
    w = weight_eval(mh2_spec(), REAL)
    assert symmetry_residual(w, np.linspace(-4, 4, 33)) < 1e-12


def test_moments_gamma_oracle():
    r = build_rule(REAL, normalization="plain")
    m = moments(weight_eval(pearson([0, -1], [0, -1]), REAL), r, 2)
    np.testing.assert_allclose([complex(m[k][0, 0]) for k in range(3)],
                               [math.sqrt(math.pi), 0, math.sqrt(math.pi) / 2], atol=1e-13)
    diag = pearson([np.zeros((2, 2)), np.diag([-2.0, -4.0])])
    m = moments(weight_eval(diag, REAL), r, 0)
    np.testing.assert_allclose(m[0], np.diag([math.sqrt(math.pi), math.sqrt(math.pi / 2)]), atol=1e-13)


def test_moments_self_convergence():
    spec = pearson([0, -1.0, 0, -1.0])
    c = Contour("real-line", default_truncation(spec))
    w = weight_eval(spec, c)
    a = moments(w, build_rule(c, panels=64), 12).data
    b = moments(w, build_rule(c, panels=128), 12).data
    assert np.max(np.abs(a - b)) <= 1e-9 * np.max(np.abs(b))


def test_zero_weight_moments():
    r = build_rule(REAL)
    w = weight_eval(pearson([0, -1], [0, -1]), REAL)
    m = moments(w, r, 4, values=np.zeros((r.size, 1, 1), complex))
    assert np.all(m.data == 0)


def test_extended_requires_closed_form():
    spec = PearsonSpec(MatrixPoly.from_list([A_NIL, np.diag([-1.0, -2.0])]),
                       MatrixPoly.from_list([np.zeros((2, 2))]))
    with pytest.raises(MoprhError):
        weight_eval(spec, REAL, "extended")
