"""Monic matrix biorthogonal polynomials from a moment table.

Left polynomials satisfy ``<P^L_n, z^k I> = delta_{nk} C_n^{-1}`` under the
normalised pairing ``<P, Q> = kappa * int P W Q dz``; right polynomials are
the mirror image.  Each monic polynomial comes from one dense block Hankel
solve.  The data object also keeps the projected moments
``m_j = <P_n, z^j>`` that feed the second-kind asymptotics.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mxcore import (
    DimensionError,
    MatrixPoly,
    MoprhError,
    SingularMatrixError,
    eye,
    inv,
    norm,
    solve_linear,
    zeros,
)
from .weights import MomentTable

REGULARITY_DOUBLE = 1e12
REGULARITY_EXTENDED = 1e28


class NotRegularError(MoprhError):
    """A block Hankel matrix is singular or too ill-conditioned."""


def hankel(moments: MomentTable, n: int) -> np.ndarray:
    """Block Hankel matrix ``[W_{j+k}]_{j,k<n}`` of size nN x nN."""
    N = moments.N
    if 2 * n - 2 > moments.K:
        raise DimensionError(f"need moments up to {2 * n - 2}, have {moments.K}")
    H = zeros((n * N, n * N), moments.data)
    for j in range(n):
        for k in range(n):
            H[j * N:(j + 1) * N, k * N:(k + 1) * N] = moments[j + k]
    return H


def _threshold(moments: MomentTable) -> float:
    return REGULARITY_EXTENDED if moments.extended else REGULARITY_DOUBLE


def monic_solve(moments: MomentTable, n: int, side: str = "L"):
    """Monic ``P_n`` for one side; returns ``(poly, hankel_condition)``."""
    N = moments.N
    if side not in ("L", "R"):
        raise ValueError("side must be 'L' or 'R'")
    if 2 * n > moments.K:
        raise DimensionError(f"degree {n} needs moments up to {2 * n}, have {moments.K}")
    coeffs = zeros((n + 1, N, N), moments.data)
    coeffs[n] = eye(N, moments.data)
    if n == 0:
        return MatrixPoly(coeffs), 1.0
    H = hankel(moments, n)
    try:
        if side == "L":
            rhs = np.concatenate([moments[n + j] for j in range(n)], axis=1)
            sol = solve_linear(H.T, -rhs.T)
            x = sol.x.T
            for k in range(n):
                coeffs[k] = x[:, k * N:(k + 1) * N]
        else:
            rhs = np.concatenate([moments[n + k] for k in range(n)], axis=0)
            sol = solve_linear(H, -rhs)
            for k in range(n):
                coeffs[k] = sol.x[k * N:(k + 1) * N, :]
    except SingularMatrixError as exc:
        raise NotRegularError(f"block Hankel matrix of order {n} is singular") from exc
    if sol.condition > _threshold(moments):
        raise NotRegularError(f"block Hankel matrix of order {n} has condition {sol.condition:.3e}")
    return MatrixPoly(coeffs), sol.condition


def projected_moments(moments: MomentTable, P: MatrixPoly, j_max: int, side: str = "L"):
    """``m_j = sum_k a_k W_{k+j}`` (left) or ``sum_k W_{k+j} a_k`` (right), j = 0..j_max."""
    d = P.degree
    if d + j_max > moments.K:
        raise DimensionError(f"need moments up to {d + j_max}, have {moments.K}")
    N = moments.N
    out = zeros((j_max + 1, N, N), moments.data)
    for j in range(j_max + 1):
        acc = zeros((N, N), moments.data)
        for k in range(d + 1):
            acc = acc + (P.coeffs[k] @ moments[k + j] if side == "L" else moments[k + j] @ P.coeffs[k])
        out[j] = acc
    return out


@dataclass(eq=False)
class RecurrenceData:
    """Everything derived from the moments for degrees ``0..n_top``.

    ``mL[n][j]`` and ``mR[n][j]`` are projected moments for ``j = 0..n+Kq``.
    Conventions: ``C_{-1} = I``, ``P_{-1} = 0``, ``Q_{-1} = -I``.
    """

    moments: MomentTable
    n_top: int
    Kq: int
    PL: list
    PR: list
    Cinv: list
    CinvR: list
    Cmat: list
    mL: list
    mR: list
    conditions: list
    extras: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.moments.N

    @property
    def extended(self) -> bool:
        return self.moments.extended

    def _ref(self):
        return self.moments.data

    def _check(self, n, lo=-1, hi=None):
        hi = self.n_top if hi is None else hi
        if not lo <= n <= hi:
            raise IndexError(f"index {n} outside the computed range [{lo}, {hi}]")

    def I(self):
        return eye(self.N, self._ref())

    def Z(self):
        return zeros((self.N, self.N), self._ref())

    def P(self, n: int, side: str = "L") -> MatrixPoly:
        self._check(n)
        if n == -1:
            return MatrixPoly(zeros((1, self.N, self.N), self._ref()))
        return self.PL[n] if side == "L" else self.PR[n]

    def C(self, n: int):
        self._check(n)
        return self.I() if n == -1 else self.Cmat[n]

    def C_inv(self, n: int):
        self._check(n)
        return self.I() if n == -1 else self.Cinv[n]

    def p(self, j: int, n: int, side: str = "L"):
        """Coefficient ``p^j_n`` of ``z^{n-j}`` in the monic polynomial."""
        P = self.P(n, side)
        if n == -1 or j > n or j < 0:
            return self.Z()
        return P.coeffs[n - j]

    def projected(self, n: int, j: int, side: str = "L"):
        """``m_j`` for ``P_n`` (left) or ``P^R_n`` (right); ``j`` absolute."""
        self._check(n, 0)
        arr = self.mL[n] if side == "L" else self.mR[n]
        if j >= arr.shape[0]:
            raise IndexError(f"projected moment {j} beyond stored order for n={n}")
        return arr[j]

    def q(self, j: int, n: int, side: str = "L"):
        """Second-kind expansion coefficient ``q^j_n`` (``q^0_n = I``)."""
        if n == -1:
            return self.I() if j == 0 else self.Z()
        if side == "L":
            return self.C(n) @ self.projected(n, n + j, "L")
        return self.projected(n, n + j, "R") @ self.C(n)

    def beta(self, n: int, side: str = "L"):
        self._check(n, 0, self.n_top - 1)
        bL = self.p(1, n, "L") - self.p(1, n + 1, "L")
        if side == "L":
            return bL
        return self.C(n) @ bL @ self.C_inv(n)

    def beta_direct(self, n: int, side: str = "R"):
        """``beta`` from first subleading coefficients of the given side."""
        self._check(n, 0, self.n_top - 1)
        return self.p(1, n, side) - self.p(1, n + 1, side)

    def gamma(self, n: int, side: str = "L", lattice: bool = False):
        """``gamma^L_n = C_n^{-1} C_{n-1}``, ``gamma^R_n = C_{n-1} C_n^{-1}``.

        With ``lattice=True`` the value at ``n = 0`` is zero, the convention of
        the nonlinear lattice equations (the ``P_{-1}`` term is absent).
        """
        self._check(n, 0)
        if n == 0 and lattice:
            return self.Z()
        if side == "L":
            return self.C_inv(n) @ self.C(n - 1)
        return self.C(n - 1) @ self.C_inv(n)

    def lattice_C(self, n: int):
        """``C_n`` with ``C_{-1}`` read as zero (terms carried by ``P_{-1}``)."""
        if n == -1:
            return self.Z()
        return self.C(n)


def recurrence(moments: MomentTable, n_max: int, Kq: int = 6) -> RecurrenceData:
    """Solve for ``P_0..P_{n_max+1}`` on both sides and assemble recurrence data.

    ``Kq`` is the number of second-kind coefficients kept beyond the leading one.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    n_top = n_max + 1
    need = 2 * n_top + Kq
    if moments.K < need:
        raise DimensionError(f"recurrence to n={n_max} with Kq={Kq} needs moments up to {need}")
    PL, PR, Cinv, CinvR, Cm, mL, mR, conds = [], [], [], [], [], [], [], []
    for n in range(n_top + 1):
        pl, cond = monic_solve(moments, n, "L")
        pr, _ = monic_solve(moments, n, "R")
        ml = projected_moments(moments, pl, n + Kq, "L")
        mr = projected_moments(moments, pr, n + Kq, "R")
        ci = ml[n]
        PL.append(pl)
        PR.append(pr)
        Cinv.append(ci)
        CinvR.append(mr[n])
        try:
            Cm.append(inv(ci))
        except SingularMatrixError as exc:
            raise NotRegularError(f"C_{n}^-1 is singular") from exc
        mL.append(ml)
        mR.append(mr)
        conds.append(cond)
    return RecurrenceData(moments, n_top, Kq, PL, PR, Cinv, CinvR, Cm, mL, mR, conds)


def pairing(moments: MomentTable, A: MatrixPoly, B: MatrixPoly):
    """``<A, B> = sum_{k,l} a_k W_{k+l} b_l`` from the moment table."""
    if A.degree + B.degree > moments.K:
        raise DimensionError("not enough moments for the pairing")
    acc = zeros((moments.N, moments.N), moments.data)
    for k in range(A.degree + 1):
        for l in range(B.degree + 1):
            acc = acc + A.coeffs[k] @ moments[k + l] @ B.coeffs[l]
    return acc


def biorthogonality_residual(data: RecurrenceData, n_max: int | None = None) -> float:
    """Max over ``n, m <= n_max`` of ``||<P^L_n, P^R_m> - delta_{nm} C_n^{-1}||``, relative."""
    n_max = data.n_top if n_max is None else n_max
    worst = 0.0
    for n in range(n_max + 1):
        scale = max(1.0, norm(data.C_inv(n)))
        for m in range(n_max + 1):
            g = pairing(data.moments, data.P(n, "L"), data.P(m, "R"))
            if n == m:
                g = g - data.C_inv(n)
            worst = max(worst, norm(g) / scale)
    return worst


def recurrence_residual(data: RecurrenceData, n: int, side: str = "L") -> float:
    """Coefficientwise residual of the three-term recurrence at degree ``n``."""
    zI = MatrixPoly.identity_z(data.N, data._ref())
    Pn, Pn1, Pm1 = data.P(n, side), data.P(n + 1, side), data.P(n - 1, side)
    b = data.beta(n, side)
    g = data.gamma(n, side)
    if side == "L":
        r = zI @ Pn - Pn1 - b @ Pn - g @ Pm1
    else:
        r = Pn @ zI - Pn1 - Pn @ b - Pm1 @ g
    return r.max_coeff_norm()


def symmetric_reduction_residual(data: RecurrenceData, n_max: int | None = None) -> float:
    """``||P^R_n - (P^L_n)^T||`` for symmetric weights."""
    n_max = data.n_top if n_max is None else n_max
    worst = 0.0
    for n in range(n_max + 1):
        d = data.P(n, "R").coeffs - np.swapaxes(data.P(n, "L").coeffs, 1, 2)
        worst = max(worst, norm(d))
    return worst


def associated_first_kind(data: RecurrenceData, n: int, side: str = "L") -> MatrixPoly:
    """``P^{(1)}_{n-1}(z) = kappa int (P_n(z') - P_n(z)) / (z' - z) W(z') dz'`` (mirror for right)."""
    N = data.N
    if n <= 0:
        return MatrixPoly(zeros((1, N, N), data._ref()))
    P = data.P(n, side)
    a = P.coeffs
    out = zeros((n, N, N), data._ref())
    for m in range(n):
        acc = zeros((N, N), data._ref())
        for k in range(m + 1, n + 1):
            W = data.moments[k - 1 - m]
            acc = acc + (a[k] @ W if side == "L" else W @ a[k])
        out[m] = acc
    return MatrixPoly(out)


def recurrence_table(data: RecurrenceData, n_max: int):
    """Rows ``(n, beta^L_n, gamma^L_n)`` for reporting."""
    rows = []
    for n in range(n_max + 1):
        rows.append((n, data.beta(n, "L"), data.gamma(n, "L") if n >= 1 else None))
    return rows
