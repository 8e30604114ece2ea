"""Differential identities: Sylvester systems, second-order equations, adjoint operators.

Notation: ``D^L = diag(h^L, -h^R)``, ``D^R = diag(h^R, -h^L)`` and the Miura
map ``M(A) = A' + A^2``.  The structure matrices come from :mod:`rhframe`.
Polynomial identities are checked coefficientwise; identities involving
second-kind functions are sampled at points off the contour.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .biorth import pairing
from .mxcore import MatrixPoly, MoprhError, miura, norm, to_double
from .rhframe import Frames
from .weights import MomentTable, Weight


class NotHermiteClassError(MoprhError, ValueError):
    pass


@dataclass(frozen=True)
class OdeReport:
    identity: str
    n: int
    samples: tuple
    residual: float
    tolerance: float
    eigenvalue: np.ndarray | None = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tolerance)


def _report(identity, n, samples, values, tol, eigenvalue=None):
    return OdeReport(identity, n, tuple(complex(z) for z in samples), float(max(values, default=0.0)),
                     tol, eigenvalue)


def dressing(frames: Frames, side="L") -> MatrixPoly:
    return frames.pearson_block(side)


def H_matrix(frames: Frames, n: int, side="L", M: MatrixPoly | None = None) -> MatrixPoly:
    """``M(M_n) - M(D)``, the difference of two Miura maps (polynomial)."""
    if M is None:
        sm = frames.structure_matrix(n)
        M = sm.ML if side == "L" else sm.MR
    return miura(M) - miura(dressing(frames, side))


# --------------------------------------------------------------- first order

def sylvester_matrix_residual(frames: Frames, n: int, z, side="L") -> float:
    """``Y' - M Y + Y D^L`` (left) or ``Y' - Y M + D^R Y`` (right) at ``z``."""
    z = complex(z)
    sm = frames.structure_matrix(n)
    Y, dY = frames.Y(n, z, side), frames.Y(n, z, side, deriv=1)
    D = dressing(frames, side)(z)
    if side == "L":
        return norm(dY - sm.ML(z) @ Y + Y @ D)
    return norm(dY - Y @ sm.MR(z) + D @ Y)


def split_sylvester_residuals(frames: Frames, n: int, z, printed_q_sign=False) -> dict:
    """Row-by-row form of the Sylvester systems.

    With ``printed_q_sign`` the second-kind rows use ``Q' + Q h^R`` and
    ``Q' + h^L Q`` on the left side of the equation instead of the minus
    signs that follow from ``D^L`` and ``D^R``.
    """
    z = complex(z)
    sm = frames.structure_matrix(n)
    (L11, L12), (L21, L22) = sm.ML.blocks()
    (R11, R12), (R21, R22) = sm.MR.blocks()
    L11, L12, L21, L22, R11, R12, R21, R22 = (m(z) for m in (L11, L12, L21, L22, R11, R12, R21, R22))
    hl, hr = frames.spec.hL(z), frames.spec.hR(z)
    C, Ci = frames.C(n - 1), frames.Cinv(n - 1)
    s = 1 if printed_q_sign else -1
    out = {}
    for side in ("L", "R"):
        P0, P1 = frames.P(n, z, side), frames.P(n - 1, z, side)
        dP0 = frames.sk.poly(n, side).derivative()(z)
        dP1 = frames.sk.poly(n - 1, side).derivative()(z) if n >= 1 else 0 * P0
        Q0, Q1 = frames.Q(n, z, side), frames.Q(n - 1, z, side)
        dQ0, dQ1 = frames.Q(n, z, side, 1), frames.Q(n - 1, z, side, 1)
        if side == "L":
            out["left P_n row"] = norm(dP0 + P0 @ hl - (L11 @ P0 - L12 @ C @ P1))
            out["left P_n-1 row"] = norm(dP1 + P1 @ hl - (-Ci @ L21 @ P0 + Ci @ L22 @ C @ P1))
            out["left Q_n row"] = norm(dQ0 + s * Q0 @ hr - (L11 @ Q0 - L12 @ C @ Q1))
            out["left Q_n-1 row"] = norm(dQ1 + s * Q1 @ hr - (-Ci @ L21 @ Q0 + Ci @ L22 @ C @ Q1))
        else:
            out["right P_n row"] = norm(dP0 + hr @ P0 - (P0 @ R11 - P1 @ C @ R21))
            out["right P_n-1 row"] = norm(dP1 + hr @ P1 - (-P0 @ R12 @ Ci + P1 @ C @ R22 @ Ci))
            out["right Q_n row"] = norm(dQ0 + s * hl @ Q0 - (Q0 @ R11 - Q1 @ C @ R21))
            out["right Q_n-1 row"] = norm(dQ1 + s * hl @ Q1 - (-Q0 @ R12 @ Ci + Q1 @ C @ R22 @ Ci))
    return out


# -------------------------------------------------------------- second order

def second_order_matrix_residual(frames: Frames, n: int, z, side="L") -> float:
    """``Y'' + 2 Y' D + Y M(D) - M(M_n) Y`` (left) and its right mirror."""
    z = complex(z)
    sm = frames.structure_matrix(n)
    Dp = dressing(frames, side)
    D, MD = Dp(z), miura(Dp)(z)
    Y = frames.Y(n, z, side)
    dY, d2Y = frames.Y(n, z, side, deriv=1), frames.Y(n, z, side, deriv=2)
    if side == "L":
        return norm(d2Y + 2 * dY @ D + Y @ MD - miura(sm.ML)(z) @ Y)
    return norm(d2Y + 2 * D @ dY + MD @ Y - Y @ miura(sm.MR)(z))


def split_second_order_residuals(frames: Frames, n: int, z, drop_C=False) -> dict:
    """Scalar-row second-order equations for ``P^L, Q^L, P^R, Q^R``.

    The coupling term carries ``C_{n-1}`` next to the degree ``n-1`` function;
    ``drop_C=True`` evaluates the equations without it.
    """
    z = complex(z)
    (H11, H12), _ = H_matrix(frames, n, "L").blocks()
    (K11, _), (K21, _) = H_matrix(frames, n, "R").blocks()
    H11, H12, K11, K21 = H11(z), H12(z), K11(z), K21(z)
    hL, hR = frames.spec.hL, frames.spec.hR
    hl, hr = hL(z), hR(z)
    mL, mR = miura(hL)(z), miura(hR)(z)
    mLneg, mRneg = miura(-1 * hL)(z), miura(-1 * hR)(z)
    C = frames.I if drop_C else frames.C(n - 1)
    out = {}

    def poly_parts(k, side):
        if k < 0:
            O = frames.O
            return O, O, O
        p = frames.sk.poly(k, side)
        return p(z), p.derivative()(z), p.derivative(2)(z)

    def q_parts(k, side):
        return tuple(frames.Q(k, z, side, d) for d in (0, 1, 2))

    P, dP, d2P = poly_parts(n, "L")
    P1 = poly_parts(n - 1, "L")[0]
    out["second order P left"] = norm(d2P + 2 * dP @ hl + P @ mL - ((mL + H11) @ P - H12 @ C @ P1))
    Q, dQ, d2Q = q_parts(n, "L")
    Q1 = frames.Q(n - 1, z, "L")
    out["second order Q left"] = norm(d2Q - 2 * dQ @ hr + Q @ mRneg - ((mL + H11) @ Q - H12 @ C @ Q1))
    P, dP, d2P = poly_parts(n, "R")
    P1 = poly_parts(n - 1, "R")[0]
    out["second order P right"] = norm(d2P + 2 * hr @ dP + mR @ P - (P @ (mR + K11) - P1 @ C @ K21))
    Q, dQ, d2Q = q_parts(n, "R")
    Q1 = frames.Q(n - 1, z, "R")
    out["second order Q right"] = norm(d2Q - 2 * hl @ dQ + mLneg @ Q - (Q @ (mR + K11) - Q1 @ C @ K21))
    return out


# ------------------------------------------------------------------ operators

def ell_left(spec, P: MatrixPoly) -> MatrixPoly:
    h = spec.hL
    return P.derivative(2) + 2 * (P.derivative() @ h) + P @ miura(h)


def ell_right(spec, P: MatrixPoly) -> MatrixPoly:
    h = spec.hR
    return P.derivative(2) + 2 * (h @ P.derivative()) + miura(h) @ P


def L_left(spec, P: MatrixPoly, alphaL) -> MatrixPoly:
    """``P'' + 2 P' h^L + P alpha^L``."""
    return P.derivative(2) + 2 * (P.derivative() @ spec.hL) + P @ np.asarray(alphaL, dtype=complex)


def L_right(spec, P: MatrixPoly, alphaR) -> MatrixPoly:
    """``P'' + 2 h^R P' + alpha^R P``."""
    return P.derivative(2) + 2 * (spec.hR @ P.derivative()) + np.asarray(alphaR, dtype=complex) @ P


def adjoint_residual(spec, moments: MomentTable, P: MatrixPoly, Q: MatrixPoly) -> float:
    """``|| <l^L P, Q> - <P, l^R Q> ||`` in the weight pairing."""
    a = pairing(moments, ell_left(spec, P), Q)
    b = pairing(moments, P, ell_right(spec, Q))
    return norm(to_double(a - b))


def L_adjoint_residual(spec, moments: MomentTable, P: MatrixPoly, Q: MatrixPoly, alphaL, alphaR) -> float:
    a = pairing(moments, L_left(spec, P, alphaL), Q)
    b = pairing(moments, P, L_right(spec, Q, alphaR))
    return norm(to_double(a - b))


def alpha_constraint_residual(weight: Weight, alphaL, alphaR, zs) -> float:
    """Max of ``||(alpha^L - M(h^L)) W - W (alpha^R - M(h^R))||`` over ``zs``."""
    aL, aR = (np.asarray(a, dtype=complex) for a in (alphaL, alphaR))
    mL, mR = miura(weight.spec.hL), miura(weight.spec.hR)
    worst = 0.0
    for z in zs:
        z = complex(z)
        W = np.asarray(weight.at_z(np.array(z)), dtype=complex)
        worst = max(worst, norm((aL - mL(z)) @ W - W @ (aR - mR(z))))
    return worst


def alpha_weight_residuals(weight: Weight, alphaL, alphaR, zs) -> dict:
    """Second-order equations for ``W`` with constant ``alpha`` terms (Cauchy-formula derivatives)."""
    aL, aR = (np.asarray(a, dtype=complex) for a in (alphaL, alphaR))
    hL, hR = weight.spec.hL, weight.spec.hR
    left = right = 0.0
    for z in zs:
        z = complex(z)
        dW, d2W = weight.derivatives_at_z(z, orders=(1, 2))
        W = np.asarray(weight.at_z(np.array(z)), dtype=complex)
        hlw = hL.derivative()(z) @ W + hL(z) @ dW
        whr = dW @ hR(z) + W @ hR.derivative()(z)
        left = max(left, norm(d2W - 2 * hlw + aL @ W - W @ aR))
        right = max(right, norm(d2W - 2 * whr + W @ aR - aL @ W))
    return {"alpha weight left": left, "alpha weight right": right}


# ------------------------------------------------------------ eigen problems

def hermite_class(spec, strict=True):
    """``(A^L, B^L, A^R, B^R)`` for linear Pearson data with stable leading terms."""
    if spec.hL.degree != 1 or spec.hR.degree != 1:
        raise NotHermiteClassError("eigen problems need h^L and h^R of degree one")
    BL, AL = spec.hL.coeffs
    BR, AR = spec.hR.coeffs
    if strict:
        for name, A in (("A^L", AL), ("A^R", AR)):
            if np.max(np.linalg.eigvals(np.asarray(to_double(A), dtype=complex)).real) >= 0:
                raise NotHermiteClassError(f"{name} is not negative definite")
    return AL, BL, AR, BR


@dataclass(frozen=True)
class EigenResult:
    n: int
    lamL: np.ndarray
    lamR: np.ndarray
    residual_left: float
    residual_right: float
    intertwining: float


def eigen_extract(frames: Frames, n: int, alphaL, alphaR) -> EigenResult:
    """Read ``lambda_n`` off the degree-``n`` coefficient of ``L(P_n)`` and check the rest."""
    spec = frames.spec
    hermite_class(spec)
    d = frames.data
    PL, PR = d.P(n, "L"), d.P(n, "R")
    LL, LR = L_left(spec, PL, alphaL), L_right(spec, PR, alphaR)
    lamL = to_double(LL.coefficient(n))
    lamR = to_double(LR.coefficient(n))
    rl = (LL - lamL @ PL).max_coeff_norm()
    rr = (LR - PR @ lamR).max_coeff_norm()
    Ci = frames.Cinv(n)
    return EigenResult(n, lamL, lamR, float(rl), float(rr), norm(lamL @ Ci - Ci @ lamR))


def cross_adjoint_residual(frames: Frames, n: int, m: int, alphaL, alphaR) -> float:
    """``<L^L P^L_n, P^R_m> - <P^L_n, L^R P^R_m>``."""
    d = frames.data
    return L_adjoint_residual(frames.spec, d.moments, d.P(n, "L"), d.P(m, "R"), alphaL, alphaR)


def second_kind_eigen_residuals(frames: Frames, n: int, z, alphaL, alphaR, sign=-1) -> dict:
    """Second-order equations for ``Q^L_n`` and ``Q^R_n`` with ``alpha + sign * 2A``."""
    AL, _, AR, _ = hermite_class(frames.spec)
    AL, AR = (np.asarray(to_double(a), dtype=complex) for a in (AL, AR))
    aL, aR = (np.asarray(a, dtype=complex) for a in (alphaL, alphaR))
    ev = eigen_extract(frames, n, alphaL, alphaR)
    z = complex(z)
    hl, hr = frames.spec.hL(z), frames.spec.hR(z)
    QL, dQL, d2QL = (frames.Q(n, z, "L", k) for k in (0, 1, 2))
    QR, dQR, d2QR = (frames.Q(n, z, "R", k) for k in (0, 1, 2))
    rl = d2QL - 2 * dQL @ hr + QL @ (aR + sign * 2 * AR) - ev.lamL @ QL
    rr = d2QR - 2 * hl @ dQR + (aL + sign * 2 * AL) @ QR - QR @ ev.lamR
    return {"second kind eigen left": norm(rl), "second kind eigen right": norm(rr)}


def eigen_report(frames: Frames, n_max: int, alphaL, alphaR, zs, tol=1e-6, q_tol=1e-5) -> list:
    out = []
    for n in range(n_max + 1):
        ev = eigen_extract(frames, n, alphaL, alphaR)
        out.append(_report("eigen left", n, (), [ev.residual_left], tol, ev.lamL))
        out.append(_report("eigen right", n, (), [ev.residual_right], tol, ev.lamR))
        out.append(_report("eigen intertwining", n, (), [ev.intertwining], tol))
        qs = [second_kind_eigen_residuals(frames, n, z, alphaL, alphaR) for z in zs]
        for key in ("second kind eigen left", "second kind eigen right"):
            out.append(_report(key, n, zs, [q[key] for q in qs], q_tol))
    return out


def sylvester_report(frames: Frames, n_max: int, zs, tol=1e-6) -> list:
    out = []
    for n in range(n_max + 1):
        for side, name in (("L", "sylvester left"), ("R", "sylvester right")):
            out.append(_report(name, n, zs, [sylvester_matrix_residual(frames, n, z, side) for z in zs], tol))
        rows = [split_sylvester_residuals(frames, n, z) for z in zs]
        for key in rows[0]:
            out.append(_report(f"sylvester {key}", n, zs, [r[key] for r in rows], tol))
    return out


def second_order_report(frames: Frames, n_max: int, zs, tol=1e-6) -> list:
    out = []
    for n in range(n_max + 1):
        for side, name in (("L", "second order left"), ("R", "second order right")):
            out.append(_report(name, n, zs, [second_order_matrix_residual(frames, n, z, side) for z in zs], tol))
        rows = [split_second_order_residuals(frames, n, z) for z in zs]
        for key in rows[0]:
            out.append(_report(key, n, zs, [r[key] for r in rows], tol))
    return out


def lambda_hermite(n: int, AL, alphaL):
    """``2 n A^L + alpha^L``."""
    return 2 * n * np.asarray(AL, dtype=complex) + np.asarray(alphaL, dtype=complex)


__all__ = [
    "OdeReport", "EigenResult", "NotHermiteClassError", "H_matrix", "sylvester_matrix_residual",
    "split_sylvester_residuals", "second_order_matrix_residual", "split_second_order_residuals",
    "ell_left", "ell_right", "L_left", "L_right", "adjoint_residual", "L_adjoint_residual",
    "alpha_constraint_residual", "alpha_weight_residuals", "hermite_class", "eigen_extract",
    "cross_adjoint_residual", "second_kind_eigen_residuals", "eigen_report", "sylvester_report",
    "second_order_report", "lambda_hermite",
]
