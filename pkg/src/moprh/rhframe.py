"""Fundamental, transfer, constant-jump and structure matrices.

Left objects::

    Y^L_n = [[P_n, Q_n], [-C_{n-1} P_{n-1}, -C_{n-1} Q_{n-1}]]
    T^L_n = [[z I - beta_n, C_n^{-1}], [-C_n, 0]],      Y^L_{n+1} = T^L_n Y^L_n
    Z^L_n = Y^L_n diag(W^L, (W^R)^{-1})
    M^L_n = (S^L_n diag(h^L, -h^R) (S^L_n)^{-1})_+,    S^L_n = Y^L_n diag(z^-n, z^n)

Right objects mirror these with multiplication order reversed::

    Y^R_n = [[P^R_n, -P^R_{n-1} C_{n-1}], [Q^R_n, -Q^R_{n-1} C_{n-1}]]
    T^R_n = [[z I - beta^R_n, -C_n], [C_n^{-1}, 0]],    Y^R_{n+1} = Y^R_n T^R_n
    Z^R_n = diag(W^R, (W^L)^{-1}) Y^R_n
    M^R_n = ((S^R_n)^{-1} diag(h^R, -h^L) S^R_n)_+,     S^R_n = diag(z^-n, z^n) Y^R_n

2N x 2N matrices are plain arrays; :func:`mxcore.split_blocks` gives the
N x N grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .biorth import RecurrenceData
from .contour import QuadratureRule
from .mxcore import (
    LaurentBlock,
    MatrixPoly,
    TruncationError,
    block_diag2,
    cmatrix,
    commutator,
    det,
    inv,
    join_blocks,
    norm,
    series_inverse,
    split_blocks,
    to_double,
)
from .secondkind import JUMP_EPS, SecondKind, richardson
from .weights import PearsonSpec, Weight

CD_KINDS = ("PP", "QQ", "QP", "PQ")


@dataclass(frozen=True, eq=False)
class FrameEval:
    n: int
    z: complex
    YL: np.ndarray
    YR: np.ndarray
    ZL: np.ndarray | None
    ZR: np.ndarray | None
    detYL: complex


@dataclass(frozen=True, eq=False)
class StructureMatrix:
    n: int
    ML: MatrixPoly
    MR: MatrixPoly

    @property
    def degree(self) -> int:
        return max(self.ML.degree, self.MR.degree)


def _d(a):
    return to_double(a)


class Frames:
    """Riemann-Hilbert frames bound to one weight and its recurrence data (double precision)."""

    def __init__(self, data: RecurrenceData, weight: Weight, rule: QuadratureRule):
        self.data = data
        self.weight = weight
        self.spec: PearsonSpec = weight.spec
        self.rule = rule
        self.sk = SecondKind(data, weight, rule)
        self.N = data.N
        self.I = np.eye(self.N, dtype=complex)
        self.O = np.zeros((self.N, self.N), dtype=complex)
        self.jump_factor = 2j * math.pi * complex(rule.kappa)

    # ------------------------------------------------------------ primitives
    def C(self, n):
        return _d(self.data.C(n))

    def Cinv(self, n):
        return _d(self.data.C_inv(n))

    def P(self, n, z, side="L"):
        if n == -1:
            return self.O.copy()
        return self.sk.poly(n, side)(complex(z))

    def Q(self, n, z, side="L", deriv=0, clearance=None):
        kw = {} if clearance is None else {"clearance": clearance}
        return self.sk.Q(n, z, side, deriv, **kw)

    # ---------------------------------------------------------------- frames
    def Y(self, n, z, side="L", deriv=0, clearance=None):
        """Fundamental matrix (or its ``deriv``-th z-derivative, ``deriv <= 2``)."""
        Cm = self.C(n - 1)

        def Pd(k):
            if k == -1:
                return self.O.copy()
            p = self.sk.poly(k, side)
            return p.derivative(deriv)(complex(z)) if deriv else p(complex(z))

        def Qd(k):
            return self.Q(k, z, side, deriv, clearance)

        if side == "L":
            return join_blocks(Pd(n), Qd(n), -Cm @ Pd(n - 1), -Cm @ Qd(n - 1))
        return join_blocks(Pd(n), -Pd(n - 1) @ Cm, Qd(n), -Qd(n - 1) @ Cm)

    def Z(self, n, z, side="L", clearance=None):
        wl, wr = self.weight.factors_at_z(np.array(complex(z)))
        wl, wr = np.asarray(wl, dtype=complex), np.asarray(wr, dtype=complex)
        Y = self.Y(n, z, side, clearance=clearance)
        if side == "L":
            return Y @ block_diag2(wl, inv(wr))
        return block_diag2(wr, inv(wl)) @ Y

    def frame_eval(self, n, z, with_z=True) -> FrameEval:
        YL, YR = self.Y(n, z, "L"), self.Y(n, z, "R")
        ZL = self.Z(n, z, "L") if with_z else None
        ZR = self.Z(n, z, "R") if with_z else None
        return FrameEval(n, complex(z), YL, YR, ZL, ZR, complex(det(YL)))

    def transfer(self, n, side="L") -> MatrixPoly:
        b = _d(self.data.beta(n, side))
        zI = np.stack([-b, self.I])
        Ci, C = self.Cinv(n), self.C(n)
        if side == "L":
            grid = ((MatrixPoly(zI), Ci), (-C, self.O))
        else:
            grid = ((MatrixPoly(zI), -C), (Ci, self.O))
        return MatrixPoly.from_blocks(grid)

    def transfer_product(self, n, ell, side="L") -> MatrixPoly:
        """``T_{n+ell} ... T_n`` (left) or ``T_n ... T_{n+ell}`` (right)."""
        out = self.transfer(n, side)
        for k in range(n + 1, n + ell + 1):
            out = self.transfer(k, side) @ out if side == "L" else out @ self.transfer(k, side)
        return out

    # ------------------------------------------------------------ residuals
    def det_residual(self, n, z, side="L") -> float:
        return abs(complex(det(self.Y(n, z, side))) - 1)

    def transfer_det_residual(self, n, z, side="L") -> float:
        return abs(complex(det(self.transfer(n, side)(complex(z)))) - 1)

    def transfer_step_residual(self, n, z, side="L") -> float:
        T = self.transfer(n, side)(complex(z))
        Y0, Y1 = self.Y(n, z, side), self.Y(n + 1, z, side)
        return norm(Y1 - (T @ Y0 if side == "L" else Y0 @ T))

    def transfer_similarity_residual(self, n) -> float:
        D = block_diag2(self.C(n), -self.Cinv(n))
        Dinv = block_diag2(self.Cinv(n), -self.C(n))
        TL, TR = self.transfer(n, "L"), self.transfer(n, "R")
        return (TR - (D @ TL) @ Dinv).max_coeff_norm()

    def inverse_relation_residual(self, n, z) -> float:
        """``||(Y^L_n)^{-1} - J Y^R_n J^{-1}||`` with ``J = [[0, I], [-I, 0]]``."""
        J = join_blocks(self.O, self.I, -self.I, self.O)
        Ji = join_blocks(self.O, -self.I, self.I, self.O)
        YL, YR = self.Y(n, z, "L"), self.Y(n, z, "R")
        return norm(inv(YL) - J @ YR @ Ji)

    def corollary_residuals(self, n, z) -> dict:
        """The three bilinear identities that follow from the inverse relation."""
        z = complex(z)
        PL, QL = self.P(n, z, "L"), self.Q(n, z, "L")
        PR, QR = self.P(n, z, "R"), self.Q(n, z, "R")
        PL1, QL1 = self.P(n - 1, z, "L"), self.Q(n - 1, z, "L")
        PR1, QR1 = self.P(n - 1, z, "R"), self.Q(n - 1, z, "R")
        Ci1 = self.Cinv(n - 1)
        return {
            "QL_n PR_n-1 - PL_n QR_n-1 = C_n-1^-1": norm(QL @ PR1 - PL @ QR1 - Ci1),
            "PL_n-1 QR_n - QL_n-1 PR_n = C_n-1^-1": norm(PL1 @ QR - QL1 @ PR - Ci1),
            "QL_n PR_n - PL_n QR_n = 0": norm(QL @ PR - PL @ QR),
        }

    def cd_residuals(self, n, z, t, printed_qq=False, relative=False) -> dict:
        """Christoffel-Darboux sums and their confluent forms.

        For the ``QQ`` sum the telescoping leaves the boundary term
        ``S_W(z) - S_W(t)`` because ``Q_{-1} = -I``; ``printed_qq=True``
        drops it, which only holds in the confluent limit.  ``relative``
        divides each residual by ``max(1, size of its terms)``.
        """
        z, t = complex(z), complex(t)
        pol = {"P": lambda k, at, s: self.P(k, at, s), "Q": lambda k, at, s: self.Q(k, at, s)}
        consts = {"PP": 0, "QQ": 0, "QP": 1, "PQ": -1}
        out = {}
        for kind in CD_KINDS:
            X, Yl = pol[kind[0]], pol[kind[1]]
            s = self.O.copy()
            for k in range(n + 1):
                s = s + X(k, t, "R") @ self.C(k) @ Yl(k, z, "L")
            rhs = (X(n, t, "R") @ self.C(n) @ Yl(n + 1, z, "L")
                   - X(n + 1, t, "R") @ self.C(n) @ Yl(n, z, "L") + consts[kind] * self.I)
            if kind == "QQ" and not printed_qq:
                rhs = rhs + self.sk.stieltjes(z) - self.sk.stieltjes(t)
            lhs = (z - t) * s
            scale = max(1.0, norm(lhs), norm(rhs)) if relative else 1.0
            out[f"CD {kind}"] = norm(lhs - rhs) / scale
            a = X(n + 1, z, "R") @ self.C(n) @ Yl(n, z, "L")
            b = X(n, z, "R") @ self.C(n) @ Yl(n + 1, z, "L")
            scale = max(1.0, norm(a), norm(b)) if relative else 1.0
            out[f"CD {kind} confluent"] = norm(a - b - consts[kind] * self.I) / scale
        return out

    def constant_jump_residual(self, n, t, side="L", eps=JUMP_EPS) -> float:
        """Extrapolated mismatch of ``Z_+`` against ``Z_-`` times the constant jump."""
        c = self.rule.contour
        x = complex(c.z(np.array(t)))
        nrm = complex(c.left_normal(np.array(t)))
        f = self.jump_factor
        if side == "L":
            J = join_blocks(self.I, f * self.I, self.O, self.I)
        else:
            J = join_blocks(self.I, self.O, f * self.I, self.I)
        vals = []
        for e in eps:
            Zp = self.Z(n, x + e * nrm, side, clearance=0.0)
            Zm = self.Z(n, x - e * nrm, side, clearance=0.0)
            vals.append(Zp - (Zm @ J if side == "L" else J @ Zm))
        return norm(richardson(vals, eps))

    # --------------------------------------------------------- expansions
    def S_expansion(self, n, side="L", K=None) -> LaurentBlock:
        """``S_n`` as a series in ``1/z`` to order ``K`` from recurrence data."""
        d = self.data
        K = d.Kq if K is None else K
        if K > d.Kq:
            raise TruncationError(f"order {K} exceeds the stored second-kind order {d.Kq}")
        N = self.N
        neg = np.zeros((K, 2 * N, 2 * N), dtype=complex)
        pos = np.eye(2 * N, dtype=complex)[None]
        (b11, b12), (b21, b22) = split_blocks(neg)
        Cm = self.C(n - 1) if n >= 1 else self.O
        for j in range(1, K + 1):
            if j <= n:
                b11[j - 1] = _d(d.p(j, n, side))
            # second-kind block of degree n
            m = _d(d.projected(n, n + j - 1, side))
            if side == "L":
                b12[j - 1] = -m
            else:
                b21[j - 1] = -m
            if n >= 1:
                # first-kind block of degree n-1, coefficient of z^{n-j} times z^{-n}
                k = n - j
                if k >= 0:
                    a = _d(d.P(n - 1, side).coeffs[k])
                    if side == "L":
                        b21[j - 1] = -Cm @ a
                    else:
                        b12[j - 1] = -a @ Cm
                mm = _d(d.projected(n - 1, n - 1 + j, side))
                b22[j - 1] = Cm @ mm if side == "L" else mm @ Cm
        return LaurentBlock(pos, neg, K)

    def pearson_block(self, side="L") -> MatrixPoly:
        hL, hR = self.spec.hL, self.spec.hR
        if side == "L":
            return MatrixPoly.from_blocks(((hL, self.O), (self.O, -hR)))
        return MatrixPoly.from_blocks(((hR, self.O), (self.O, -hL)))

    def structure_matrix(self, n, K=None) -> StructureMatrix:
        """Generic structure matrices from the positive part of the dressed Pearson data."""
        d = self.spec.degree
        K = min(self.data.Kq, d + 3) if K is None else K
        if K < d:
            raise TruncationError(f"expansion order {K} is below the Pearson degree {d}")
        H_L = LaurentBlock.from_poly(self.pearson_block("L"))
        H_R = LaurentBlock.from_poly(self.pearson_block("R"))
        SL = self.S_expansion(n, "L", K)
        SR = self.S_expansion(n, "R", K)
        ML = ((SL @ H_L) @ series_inverse(SL)).positive_part()
        MR = ((series_inverse(SR) @ H_R) @ SR).positive_part()
        return StructureMatrix(n, ML, MR)

    def structure_mirror_residual(self, n) -> float:
        """``||M^R_n + J M^L_n J^{-1}||`` with ``J = [[0, -I], [I, 0]]``."""
        sm = self.structure_matrix(n)
        J = join_blocks(self.O, -self.I, self.I, self.O)
        Ji = join_blocks(self.O, self.I, -self.I, self.O)
        return (sm.MR + (J @ sm.ML) @ Ji).max_coeff_norm()

    # ------------------------------------------------------ zero curvature
    def zero_curvature_residuals(self, n, ell_max=0, cache=None) -> dict:
        """Coefficientwise residuals of the first, second and higher order formulas."""
        cache = {} if cache is None else cache

        def M(k):
            if k not in cache:
                cache[k] = self.structure_matrix(k)
            return cache[k]

        E = MatrixPoly.constant(block_diag2(self.I, self.O))
        TL, TR = self.transfer(n, "L"), self.transfer(n, "R")
        ML0, ML1 = M(n).ML, M(n + 1).ML
        MR0, MR1 = M(n).MR, M(n + 1).MR
        out = {
            "zero curvature left": (E - (ML1 @ TL - TL @ ML0)).max_coeff_norm(),
            "zero curvature right": (E - (TR @ MR1 - MR0 @ TR)).max_coeff_norm(),
            "second order zero curvature left": (
                E @ ML0 + ML1 @ E - (ML1 @ ML1 @ TL - TL @ ML0 @ ML0)).max_coeff_norm(),
            "second order zero curvature right": (
                E @ MR1 + MR0 @ E - (TR @ MR1 @ MR1 - MR0 @ MR0 @ TR)).max_coeff_norm(),
        }
        for ell in range(1, ell_max + 1):
            TLl = self.transfer_product(n, ell, "L")
            TRl = self.transfer_product(n, ell, "R")
            Mtop = M(n + ell + 1)
            out[f"higher order zero curvature left l={ell}"] = (
                TLl.derivative() - (Mtop.ML @ TLl - TLl @ ML0)).max_coeff_norm()
            out[f"higher order zero curvature right l={ell}"] = (
                TRl.derivative() - (TRl @ Mtop.MR - MR0 @ TRl)).max_coeff_norm()
        return out

    # ----------------------------------------------- expansion coefficients
    def coefficient_relations(self, n) -> dict:
        """Difference relations among expansion coefficients.

        Each entry maps a relation name to ``(residual_as_labelled,
        residual_same_side)``: the first uses the mixed left/right labels of
        the relation as usually displayed, the second the labels of a single
        side throughout.
        """
        d = self.data

        def p(j, k, s):
            return _d(d.p(j, k, s))

        def q(j, k, s):
            return _d(d.q(j, k, s))

        bL, bR = _d(d.beta(n, "L")), _d(d.beta(n, "R"))
        gL = self.Cinv(n) @ self.C(n - 1)
        gR = self.C(n - 1) @ self.Cinv(n)
        out = {}
        out["p1 left"] = (norm(p(1, n, "L") - p(1, n + 1, "L") - bL),) * 2
        out["p2 left"] = (norm(p(2, n, "L") - p(2, n + 1, "L") - bL @ p(1, n, "L") - gL),) * 2
        out["p3 left"] = (norm(p(3, n, "L") - p(3, n + 1, "L") - bL @ p(2, n, "L")
                               - gL @ p(1, n - 1, "L")),) * 2
        if n + 1 <= d.n_top and n >= 1:
            qn1 = self.Cinv(n + 1)
            out["q1 left"] = (norm(q(1, n, "L") - q(1, n - 1, "L") - bR),) * 2
            out["q2 left"] = (norm(q(2, n, "L") - q(2, n - 1, "L") - bR @ q(1, n, "L")
                                   - self.C(n) @ qn1),) * 2
            out["q1 right"] = (norm(q(1, n, "R") - q(1, n - 1, "L") - bL),
                               norm(q(1, n, "R") - q(1, n - 1, "R") - bL))
            out["q2 right"] = (norm(q(2, n, "R") - q(2, n - 1, "L") - q(1, n, "L") @ bL - qn1 @ self.C(n)),
                               norm(q(2, n, "R") - q(2, n - 1, "R") - q(1, n, "R") @ bL - qn1 @ self.C(n)))
        out["p1 right"] = (norm(p(1, n, "R") - p(1, n + 1, "L") - bR),
                           norm(p(1, n, "R") - p(1, n + 1, "R") - bR))
        out["p2 right"] = (norm(p(2, n, "R") - p(2, n + 1, "L") - p(1, n, "L") @ bR - gR),
                           norm(p(2, n, "R") - p(2, n + 1, "R") - p(1, n, "R") @ bR - gR))
        out["p3 right"] = (norm(p(3, n, "R") - p(3, n + 1, "R") - p(2, n, "L") @ bR - p(1, n - 1, "L") @ gR),
                           norm(p(3, n, "R") - p(3, n + 1, "R") - p(2, n, "R") @ bR - p(1, n - 1, "R") @ gR))
        return out


# ------------------------------------------------------------ closed forms

def hermite_structure(frames: Frames, n: int, AL, BL, AR, BR) -> MatrixPoly:
    """Closed-form ``M^L_n = diag(A^L, -A^R) z + K_n`` for linear Pearson data."""
    AL, BL, AR, BR = (cmatrix(x, frames.N) for x in (AL, BL, AR, BR))
    d = frames.data
    Ci = frames.Cinv(n)
    p1 = _d(d.p(1, n, "L"))
    if n >= 1:
        Cm = frames.C(n - 1)
        q1m = _d(d.q(1, n - 1, "L"))
    else:
        Cm = frames.O
        q1m = frames.O
    K = join_blocks(BL + commutator(p1, AL), Ci @ AR + AL @ Ci,
                    -Cm @ AL - AR @ Cm, -BR - commutator(q1m, AR))
    A = block_diag2(AL, -AR)
    return MatrixPoly(np.stack([K, A]))


def altdpi_structure(frames: Frames, n: int, lam, mu, nu) -> MatrixPoly:
    """Closed-form structure matrix for ``h^L = lam + mu z + nu z^2``, ``h^R = 0``."""
    lam, mu, nu = (cmatrix(x, frames.N) for x in (lam, mu, nu))
    d = frames.data
    O = frames.O
    Ci = frames.Cinv(n)
    p1, p2 = _d(d.p(1, n, "L")), _d(d.p(2, n, "L"))
    b = _d(d.beta(n, "L"))
    if n >= 1:
        Cm = frames.C(n - 1)
        p1m = _d(d.p(1, n - 1, "L"))
    else:
        Cm, p1m = O, O
    gam = Ci @ Cm
    M0 = block_diag2(nu, O)
    M1 = join_blocks(mu - commutator(nu, p1), nu @ Ci, -Cm @ nu, O)
    M2 = join_blocks(lam - commutator(mu, p1) - commutator(nu, p2) + nu @ p1 @ p1 - p1 @ nu @ p1 + nu @ gam,
                     (mu - commutator(nu, p1) + nu @ b) @ Ci,
                     -Cm @ (mu + p1m @ nu - nu @ p1),
                     -Cm @ nu @ Ci)
    return MatrixPoly(np.stack([M2, M1, M0]))


def dpi_structure(frames: Frames, n: int, mu, nu, variant: str = "derived") -> MatrixPoly:
    """Closed-form structure matrix for ``h^L = mu z + nu z^3``, ``h^R = 0``.

    ``variant="printed"`` keeps the coefficients exactly as commonly displayed
    (``mu`` in the ``z^2`` blocks and ``nu + ... + mu C_n^{-1} C_{n-1}`` in the
    ``z`` block); ``"derived"`` is what the positive-part construction yields.
    """
    mu, nu = (cmatrix(x, frames.N) for x in (mu, nu))
    d = frames.data
    O = frames.O

    def Cm_(k):
        return frames.C(k) if k >= 0 else O

    def gam(k):
        return frames.Cinv(k) @ Cm_(k - 1)

    def xi(k):
        if k < 0:
            return O
        return mu + commutator(_d(d.p(2, k, "L")), nu) + nu @ (gam(k) + gam(k + 1))

    Ci, Cm = frames.Cinv(n), Cm_(n - 1)
    p2 = _d(d.p(2, n, "L"))
    M0 = block_diag2(nu, O)
    M3 = join_blocks(O, xi(n) @ Ci, -Cm @ xi(n - 1), O)
    if variant == "printed":
        M1 = join_blocks(O, mu @ Ci, -Cm @ mu, O)
        M2 = block_diag2(nu + commutator(p2, nu) + mu @ gam(n), -Cm @ nu @ Ci)
    elif variant == "derived":
        M1 = join_blocks(O, nu @ Ci, -Cm @ nu, O)
        M2 = block_diag2(mu + commutator(p2, nu) + nu @ gam(n), -Cm @ nu @ Ci)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return MatrixPoly(np.stack([M3, M2, M1, M0]))


def closed_form_residual(frames: Frames, n: int, closed: MatrixPoly) -> float:
    """Coefficientwise distance between generic ``M^L_n`` and a closed form."""
    return (frames.structure_matrix(n).ML - closed).max_coeff_norm()

