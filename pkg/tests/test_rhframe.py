import numpy as np
import pytest

from moprh.mxcore import join_blocks, norm, series_inverse, to_double
from moprh.painleve import perturbed
from moprh.rhframe import (
    Frames,
    altdpi_structure,
    closed_form_residual,
    dpi_structure,
    hermite_structure,
)

from conftest import A_NIL, I2

RNG = np.random.default_rng(7)
OFF = (0.5 + 1.5j, -1.2 + 0.8j, 2.5j, 1.5 - 1.2j, -0.4 - 2.1j)


def test_initial_frame(gauss_frames):
    F = gauss_frames
    z = 1 + 1j
    Y = F.Y(0, z)
    S = F.sk.stieltjes(z)
    np.testing.assert_allclose(Y, join_blocks(F.I, S, F.O, F.I), atol=1e-15)
    assert F.det_residual(0, z) < 1e-14


def test_det_and_transfer_step(gauss_frames, mh2_frames):
    assert gauss_frames.det_residual(3, 2 + 1j) < 1e-9
    for F in (gauss_frames, mh2_frames):
        for n in range(7):
            for z in OFF[:3]:
                assert F.det_residual(n, z, "L") < 1e-8
                assert F.det_residual(n, z, "R") < 1e-8
                assert F.transfer_step_residual(n, z, "L") < 1e-8
                assert F.transfer_step_residual(n, z, "R") < 1e-8


def test_transfer_determinant_random(mh2_frames):
    zs = RNG.normal(size=5) + 1j * RNG.normal(size=5)
    for n in range(6):
        assert max(mh2_frames.transfer_det_residual(n, z, s) for z in zs for s in "LR") < 1e-10


def test_scalar_transfer_blocks(gauss_frames):
    F = gauss_frames
    T = F.transfer(1)
    C1 = complex(F.C(1)[0, 0])
    z = 0.3 - 0.2j
    np.testing.assert_allclose(T(z), [[z, 1 / C1], [-C1, 0]], atol=1e-12)


def test_transfer_similarity(mh2_frames):
    for n in range(7):
        assert mh2_frames.transfer_similarity_residual(n) < 1e-10


def test_inverse_relation(gauss_frames, mh2_frames):
    assert gauss_frames.inverse_relation_residual(0, 1 + 1j) < 1e-10
    assert gauss_frames.inverse_relation_residual(4, 3j) < 1e-8
    for n in range(1, 7):
        for z in OFF[:2]:
            assert mh2_frames.inverse_relation_residual(n, z) < 1e-7
            assert max(mh2_frames.corollary_residuals(n, z).values()) < 1e-7


def test_cd_pp_single_term_and_real_points(gauss_frames):
    F = gauss_frames
    assert F.cd_residuals(0, 1 + 1j, -0.3 + 2j)["CD PP"] < 1e-12
    # PP only involves polynomials, so points on the contour are fine
    n, z, t = 3, 0.5, -0.2
    s = sum(F.P(k, t, "R") @ F.C(k) @ F.P(k, z, "L") for k in range(n + 1))
    rhs = F.P(n, t, "R") @ F.C(n) @ F.P(n + 1, z, "L") - F.P(n + 1, t, "R") @ F.C(n) @ F.P(n, z, "L")
    assert norm((z - t) * s - rhs) < 1e-8


def test_cd_all_eight(mh2_frames):
    pairs = [(OFF[i], OFF[(i + 2) % 5]) for i in range(5)]
    for n in range(7):
        for z, t in pairs:
            r = mh2_frames.cd_residuals(n, z, t)
            assert len(r) == 8 and max(r.values()) < 1e-7, r


def test_cd_qp_confluent(gauss_frames):
    assert gauss_frames.cd_residuals(3, 2j, 1j)["CD QP confluent"] < 1e-7


def test_cd_qq_needs_boundary_term(mh2_frames):
    r = mh2_frames.cd_residuals(2, OFF[0], OFF[2], printed_qq=True)
    assert r["CD QQ"] > 1e-3
    assert r["CD QQ confluent"] < 1e-7


def test_constant_jump(gauss_frames, mh2_frames):
    assert gauss_frames.constant_jump_residual(0, 0.2) < 1e-5
    assert gauss_frames.constant_jump_residual(2, 0.4) < 1e-4
    assert gauss_frames.constant_jump_residual(2, 0.4, "R") < 1e-4
    assert mh2_frames.constant_jump_residual(3, -0.45, "R") < 1e-4


def test_series_inverse_of_S_is_mirrored_right_S(mh2_frames):
    F = mh2_frames
    J = join_blocks(F.O, F.I, -F.I, F.O)
    Ji = join_blocks(F.O, -F.I, F.I, F.O)
    for n in range(4):
        inv = series_inverse(F.S_expansion(n, "L"), 4)
        SR = F.S_expansion(n, "R", 4)
        for k in range(0, 5):
            assert norm(inv.coefficient(-k) - J @ SR.coefficient(-k) @ Ji) < 1e-9


def test_S_expansion_matches_frame(mh2_frames):
    F = mh2_frames
    z = 40j
    for n in range(4):
        S = F.S_expansion(n, "L")
        D = np.diag(np.concatenate([np.full(2, z ** -n), np.full(2, z ** n)]))
        assert norm(S(z) - F.Y(n, z) @ D) < 1e-6


def test_hermite_closed_form(gauss_frames, mh2_frames, nonsym):
    for n in range(7):
        assert closed_form_residual(gauss_frames, n, hermite_structure(gauss_frames, n, -1, 0, -1, 0)) < 1e-8
        assert closed_form_residual(mh2_frames, n, hermite_structure(mh2_frames, n, -I2, A_NIL, -I2, A_NIL.T)) < 1e-8
    F = nonsym.frames()
    BR = np.array([[0.3, 0], [0.5, 0]])
    for n in range(6):
        assert closed_form_residual(F, n, hermite_structure(F, n, -I2, A_NIL, -I2, BR)) < 1e-8


def test_scalar_hermite_offdiagonal_product(gauss_frames):
    for n in range(1, 7):
        K = gauss_frames.structure_matrix(n).ML.coefficient(0)
        assert abs(complex(K[0, 1] * K[1, 0]) + 2 * n) < 1e-8


def test_dpi_closed_form(freud_frames, freud0):
    for n in range(7):
        assert closed_form_residual(freud_frames, n, dpi_structure(freud_frames, n, -1, -1)) < 1e-8
    # with mu = nu the two readings coincide; t = 0 separates them
    F = freud0.frames()
    for n in range(1, 7):
        assert closed_form_residual(F, n, dpi_structure(F, n, 0, -1)) < 1e-8
        assert closed_form_residual(F, n, dpi_structure(F, n, 0, -1, "printed")) > 1e-2


def test_dpi_closed_form_block(freud_frames):
    # z^2 coefficient (M^1 block): [[0, nu C_n^-1], [-C_{n-1} nu, 0]]
    F = freud_frames
    n = 3
    M1 = F.structure_matrix(n).ML.coefficient(2)
    np.testing.assert_allclose(M1[0, 1], -F.Cinv(n)[0, 0], atol=1e-8)
    np.testing.assert_allclose(M1[1, 0], F.C(n - 1)[0, 0], atol=1e-8)


def test_altdpi_closed_form(altdpi_frames):
    lam, mu, nu = np.array([[0.3]]), np.array([[0.0]]), np.array([[1.0]])
    for n in range(7):
        assert closed_form_residual(altdpi_frames, n, altdpi_structure(altdpi_frames, n, lam, mu, nu)) < 1e-8


def test_structure_mirror(mh2_frames, freud_frames):
    for F in (mh2_frames, freud_frames):
        for n in range(6):
            assert F.structure_mirror_residual(n) < 1e-9


@pytest.mark.parametrize("fixture", ["gauss_frames", "mh2_frames", "freud_frames", "altdpi_frames"])
def test_zero_curvature(fixture, request):
    F = request.getfixturevalue(fixture)
    cache = {}
    for n in range(7):
        r = F.zero_curvature_residuals(n, 3, cache)
        assert max(r.values()) < 1e-8, (n, r)


def test_zero_curvature_detector(gauss):
    n = 2
    F = Frames(perturbed(gauss.data, n), gauss.weight, gauss.rule)
    clean = gauss.frames().zero_curvature_residuals(n, 0)
    assert clean["zero curvature left"] < 1e-9
    assert F.zero_curvature_residuals(n, 0)["zero curvature left"] > 1e-3


def test_coefficient_relations(nonsym):
    F = nonsym.frames()
    worst_mixed = 0.0
    for n in range(1, 6):
        for name, (labelled, same) in F.coefficient_relations(n).items():
            assert same < 1e-8, (n, name, same)
            if name in ("p1 right", "p2 right", "q1 right"):
                worst_mixed = max(worst_mixed, labelled)
    assert worst_mixed > 1e-2


def test_frames_accept_extended_data(altdpi):
    F = altdpi.frames()
    assert altdpi.data.extended
    assert F.det_residual(3, 3 + 1j) < 1e-8
    assert isinstance(to_double(altdpi.data.C(2)), np.ndarray)
