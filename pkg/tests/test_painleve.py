import math

import numpy as np
import pytest

from moprh.mxcore import MoprhError, norm, to_double
from moprh.painleve import (
    LatticeState,
    altdPI_gamma_from_beta,
    altdPI_residual,
    dPI_iterate,
    dPI_residual,
    hermite_system_residual,
    lattice_vs_oracle,
    magnus_altdpi_residuals,
    magnus_dpi_residual,
    perturbed,
    state_from_data,
)
from moprh.pipeline import build, pearson

from conftest import I2, altdpi_spec

GAMMA1 = 2 * math.gamma(0.75) / math.gamma(0.25)


def scalars(data, n_top, getter):
    return [complex(np.asarray(to_double(getter(n)))[0, 0]) for n in range(n_top + 1)]


def test_hermite_system_scalar(gauss):
    for n in range(7):
        r = hermite_system_residual(gauss.data, -1, 0, -1, 0, n)
        assert max(r.values()) < 1e-8, (n, r)


def test_hermite_system_diagonal(diag_hermite):
    A, B = np.diag([-1.0, -2.0]), np.diag([0.0, 0.3])
    for n in range(7):
        assert max(hermite_system_residual(diag_hermite.data, A, B, A, B, n).values()) < 1e-8


def test_hermite_system_detector(gauss):
    for n in range(5):
        bad = perturbed(gauss.data, n + 1)
        assert hermite_system_residual(bad, -1, 0, -1, 0, n)["hermite system (i)"] > 1e-3


def test_altdpi_scalar_magnus(altdpi):
    d = altdpi.data
    b = scalars(d, 8, d.beta)
    g = scalars(d, 8, lambda k: d.gamma(k, lattice=True))
    for n in range(7):
        r1, r2 = magnus_altdpi_residuals(b, g, 0.3, n)
        assert r1 < 1e-8 and r2 < 1e-8, (n, r1, r2)


def test_altdpi_matrix_pair_scalar(altdpi):
    for n in range(7):
        r = altdPI_residual(altdpi.data, 0.3, 0.0, 1.0, n)
        assert max(r.values()) < 1e-8, (n, r)
    # n = 0 first equation: nu (beta_0 + beta_1) gamma_1 = -1
    assert altdPI_residual(altdpi.data, 0.3, 0.0, 1.0, 0)["alt-dPI first"] < 1e-10


def test_altdpi_diagonal(altdpi_diag):
    lam = np.diag([0.3, -0.5])
    for n in range(7):
        r = altdPI_residual(altdpi_diag.data, lam, np.zeros((2, 2)), np.eye(2), n)
        assert max(r.values()) < 1e-8, (n, r)


def test_altdpi_displayed_second_equation_fails():
    # the two readings differ only through mu
    d = build(altdpi_spec(mu=0.4), 7, kind="hyperbola", precision="extended").data
    for n in range(4):
        assert max(altdPI_residual(d, 0.3, 0.4, 1.0, n).values()) < 1e-8
        assert altdPI_residual(d, 0.3, 0.4, 1.0, n, "printed")["alt-dPI second"] > 1e-2


def test_gamma_from_beta_constant_example():
    # nu = -I, mu = 2 I, all beta zero: gamma_{n+1} = -(n+1) / 2 I
    for n in range(4):
        st = LatticeState(2)
        st.betas = [np.zeros((2, 2)) for _ in range(n + 2)]
        for _ in range(n):
            st.advance()
        g = altdPI_gamma_from_beta(st, 2 * I2, -I2)
        np.testing.assert_allclose(g, -(n + 1) / 2 * I2, atol=1e-15)


def test_gamma_from_beta_on_data(altdpi):
    d = altdpi.data
    for n in range(6):
        g = altdPI_gamma_from_beta(state_from_data(d, n), np.zeros((1, 1)), np.eye(1))
        ref = d.gamma(n + 1, lattice=True)
        assert norm(to_double(g - ref)) < 1e-8 * max(1.0, norm(to_double(ref)))


def test_dpi_oracle_values(freud0):
    d = freud0.data
    g = scalars(d, 3, lambda k: d.gamma(k, lattice=True))
    assert abs(g[1] - GAMMA1) < 1e-12
    assert abs(g[1] - 0.67598) < 1e-5
    assert abs(g[2] - 0.80336) < 1e-5
    assert abs(g[2] - (1 / GAMMA1 - GAMMA1)) < 1e-12


@pytest.mark.parametrize("fixture, t", [("freud0", 0.0), ("freud", 0.5)])
def test_magnus_dpi(fixture, t, request):
    d = request.getfixturevalue(fixture).data
    g = scalars(d, 10, lambda k: d.gamma(k, lattice=True))
    for n in range(1, 9):
        assert magnus_dpi_residual(g, t, n) < 1e-10
        assert dPI_residual(d, -2 * t, -1, n) < 1e-10


def test_lattice_vs_oracle_double(freud, freud0):
    for b, t in ((freud, 0.5), (freud0, 0.0)):
        cmp = lattice_vs_oracle(b.data, [[-2 * t]], 10)
        assert cmp.max_diff < 1e-5 and cmp.divergence_index is None and not cmp.events


def test_displayed_lattice_diverges_or_halts(freud, freud0):
    cmp = lattice_vs_oracle(freud.data, [[-1.0]], 10, "printed")
    assert cmp.divergence_index is not None and cmp.divergence_index <= 3
    run = lattice_vs_oracle(freud0.data, [[0.0]], 10, "printed")
    assert run.events and run.events[0]["n"] == 2


def test_lattice_extended():
    b = build(pearson([0, -1.0, 0, -1.0]), 15, precision="extended")
    cmp = lattice_vs_oracle(b.data, [[-1.0]], 14)
    assert cmp.max_diff < 1e-8


def test_iterate_matrix_commutator_term():
    # with nu = -I the commutator vanishes and diagonal runs decouple
    g1 = np.diag([GAMMA1, 0.5])
    run = dPI_iterate(g1, np.diag([0.0, -1.0]), 6)
    s = dPI_iterate(np.array([[GAMMA1]]), np.array([[0.0]]), 6)
    for a, b in zip(run.gammas, s.gammas):
        assert abs(a[0, 0] - b[0, 0]) < 1e-14 and a[0, 1] == 0


def test_iterate_singular_event():
    run = dPI_iterate(np.zeros((1, 1)), np.zeros((1, 1)), 5)
    assert run.halted and run.events[0] == {"event": "singular gamma", "n": 1}


def test_printed_requires_minus_identity():
    with pytest.raises(ValueError):
        dPI_iterate(np.eye(1), np.zeros((1, 1)), 4, "printed", nu=np.eye(1))


def test_state_audit(mh2):
    st = state_from_data(mh2.data, 8)
    assert st.audit() < 1e-12
    st.sum_bb = st.sum_bb + 1.0
    with pytest.raises(MoprhError):
        st.audit()
