"""Nonlinear difference systems for the recursion coefficients.

Three families are covered, all with ``h^R = 0`` except the first:

* linear Pearson data ``h^L = A^L z + B^L``, ``h^R = A^R z + B^R``;
* ``h^L = lam + mu z + nu z^2`` (alternate discrete Painleve I);
* ``h^L = mu z + nu z^3`` (discrete Painleve I, Freud type).

Lattice conventions: ``gamma_0 = 0`` and ``C_{-1}`` acts as zero, so sums over
empty ranges vanish and the ``n = 0`` equations are well defined.
"""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field

import numpy as np

from .biorth import RecurrenceData
from .mxcore import (
    MoprhError,
    SingularMatrixError,
    cmatrix,
    commutator,
    eye,
    inv,
    is_extended,
    norm,
    to_double,
    zeros,
)

log = logging.getLogger(__name__)

SUM_CHECK_EVERY = 5


class LatticeSingularity(MoprhError, ArithmeticError):
    pass


# ------------------------------------------------------------------ state

@dataclass
class LatticeState:
    """Sliding window of recursion coefficients with running nonlocal sums.

    ``sum_beta = sum_{k<n} beta_k``, ``sum_gamma = sum_{m<n} gamma_m`` and
    ``sum_bb = sum_{0<=k<m<n} beta_m beta_k``.  The full history is kept so
    the incremental sums can be audited.
    """

    N: int
    ref: object = None
    n: int = 0
    betas: list = field(default_factory=list)
    gammas: list = field(default_factory=list)
    sum_beta: np.ndarray | None = None
    sum_gamma: np.ndarray | None = None
    sum_bb: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        Z = zeros((self.N, self.N), self.ref)
        for name in ("sum_beta", "sum_gamma", "sum_bb"):
            if getattr(self, name) is None:
                setattr(self, name, Z.copy())

    def zero(self):
        return zeros((self.N, self.N), self.ref)

    def beta(self, k):
        return self.betas[k] if 0 <= k < len(self.betas) else self.zero()

    def gamma(self, k):
        return self.gammas[k] if 0 <= k < len(self.gammas) else self.zero()

    def advance(self):
        """Fold index ``n`` into the sums and move to ``n + 1``."""
        b, g = self.beta(self.n), self.gamma(self.n)
        self.sum_bb = self.sum_bb + b @ self.sum_beta
        self.sum_beta = self.sum_beta + b
        self.sum_gamma = self.sum_gamma + g
        self.n += 1
        if self.n % SUM_CHECK_EVERY == 0:
            self.audit()

    def direct_sums(self):
        n = self.n
        sb, sg, sbb = self.zero(), self.zero(), self.zero()
        for m in range(n):
            sbb = sbb + self.beta(m) @ sb
            sb = sb + self.beta(m)
            sg = sg + self.gamma(m)
        return sb, sg, sbb

    def audit(self, tol=None):
        sb, sg, sbb = self.direct_sums()
        scale = 1.0 + max(norm(sb), norm(sg), norm(sbb))
        tol = (1e-25 if is_extended(sb) else 1e-11) * scale if tol is None else tol
        err = max(norm(sb - self.sum_beta), norm(sg - self.sum_gamma), norm(sbb - self.sum_bb))
        if err > tol:
            raise MoprhError(f"running sums drifted by {err:.3e} at n={self.n}")
        return err


def state_from_data(data: RecurrenceData, n: int, **params) -> LatticeState:
    """Lattice state at index ``n`` seeded from recursion data."""
    ref = data._ref()
    st = LatticeState(data.N, ref=ref, params=params)
    top = data.n_top - 1
    st.betas = [data.beta(k) for k in range(top + 1)]
    st.gammas = [data.gamma(k, lattice=True) for k in range(top + 1)]
    for _ in range(n):
        st.advance()
    return st


def perturbed(data: RecurrenceData, n: int, rel: float = 0.01) -> RecurrenceData:
    """Copy of ``data`` with ``C_n`` scaled by ``1 + rel`` (residual detector input)."""
    Cm, Ci = list(data.Cmat), list(data.Cinv)
    Cm[n] = Cm[n] * (1 + rel)
    Ci[n] = inv(Cm[n])
    return dataclasses.replace(data, Cmat=Cm, Cinv=Ci)


def _params(data, *xs):
    ref = data._ref()
    return tuple(np.asarray(cmatrix(x, data.N), dtype=ref.dtype) for x in xs)


def _beta(data, n):
    return data.beta(n, "L")


def _gamma(data, n):
    return data.gamma(n, "L", lattice=True)


# ----------------------------------------------------------- linear Pearson

def hermite_system_residual(data: RecurrenceData, AL, BL, AR, BR, n: int) -> dict:
    """Residuals of the two equations of the cleaned linear-Pearson system."""
    AL, BL, AR, BR = _params(data, AL, BL, AR, BR)
    I, O = data.I(), data.Z()
    C = data.lattice_C

    def Ci(k):
        return data.C_inv(k) if k >= 0 else O

    def S(m):
        out = O.copy()
        for k in range(m):
            out = out + _beta(data, k)
        return out

    b = _beta(data, n)
    rhs = Ci(n) @ C(n - 1) @ AL - Ci(n + 1) @ AR @ C(n) - AL @ Ci(n + 1) @ C(n) + Ci(n) @ AR @ C(n - 1)
    e1 = I - commutator(b, BL - commutator(S(n), AL) + AL @ b) - rhs
    SR = O.copy()
    for k in range(n):
        SR = SR + C(k) @ _beta(data, k) @ Ci(k)
    bm = _beta(data, n - 1) if n >= 1 else O
    e2 = (C(n - 1) @ BL + BR @ C(n - 1) - C(n - 1) @ commutator(S(n - 1) if n >= 1 else O, AL)
          + (C(n - 1) @ AL + AR @ C(n - 1)) @ bm + commutator(SR, AR) @ C(n - 1))
    return {"hermite system (i)": norm(to_double(e1)), "hermite system (ii)": norm(to_double(e2))}


# ------------------------------------------------------------------ alt-dPI

def altdPI_residual(data: RecurrenceData, lam, mu, nu, n: int, variant: str = "derived") -> dict:
    """Residuals of the matrix alt-dPI pair at index ``n``.

    ``variant="derived"`` uses the second equation as it follows from the
    ``z^{-n-1}`` coefficient of the second-kind ODE; ``"printed"`` keeps the
    commonly displayed form with ``- mu beta_n`` and ``[mu, S](I + beta_n)``.
    """
    lam, mu, nu = _params(data, lam, mu, nu)
    st = state_from_data(data, n)
    I = data.I()
    b0, b1 = _beta(data, n), _beta(data, n + 1)
    g0, g1 = _gamma(data, n), _gamma(data, n + 1)
    S = st.sum_beta
    e1 = (mu + commutator(nu, S) + nu @ (b0 + b1)) @ g1 + (n + 1) * I
    # sum_{m=1}^{n-1} gamma_m equals sum_{m<n} gamma_m since gamma_0 = 0
    nonlocal_ = commutator(nu, st.sum_gamma - st.sum_bb) + commutator(nu, S) @ S
    base = lam + nu @ (g0 + g1 + b0 @ b0) + nonlocal_
    if variant == "derived":
        e2 = base + mu @ b0 + commutator(mu, S) + commutator(nu, S) @ b0
    elif variant == "printed":
        e2 = base - mu @ b0 + commutator(mu, S) @ (I + b0)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return {"alt-dPI first": norm(to_double(e1)), "alt-dPI second": norm(to_double(e2))}


def altdPI_gamma_from_beta(state: LatticeState, mu, nu, beta_next=None):
    """``gamma_{n+1} = -(n+1) (mu + [nu, S_n] + nu (beta_n + beta_{n+1}))^{-1}``."""
    n = state.n
    b1 = state.beta(n + 1) if beta_next is None else beta_next
    bracket = mu + commutator(nu, state.sum_beta) + nu @ (state.beta(n) + b1)
    try:
        return -(n + 1) * inv(bracket)
    except SingularMatrixError as exc:
        log.warning("alt-dPI bracket singular at n=%d", n)
        raise LatticeSingularity(f"alt-dPI bracket singular at n={n}") from exc


def magnus_altdpi_residuals(beta, gamma, t, n) -> tuple:
    """Scalar pair ``gamma_n + gamma_{n+1} + beta_n^2 + t`` and ``n + gamma_n (beta_n + beta_{n-1})``."""
    bm = beta[n - 1] if n >= 1 else 0.0
    r1 = gamma[n] + gamma[n + 1] + beta[n] ** 2 + t
    r2 = n + gamma[n] * (beta[n] + bm)
    return abs(r1), abs(r2)


# --------------------------------------------------------------------- dPI

def dPI_residual(data: RecurrenceData, mu, nu, n: int) -> float:
    """``||(mu + nu (g_{n+2} + g_{n+1} + g_n) + [nu, sum_{k<n} g_k]) g_{n+1} + (n+1) I||``."""
    mu, nu = _params(data, mu, nu)
    Sg = data.Z()
    for k in range(n):
        Sg = Sg + _gamma(data, k)
    g = [_gamma(data, n + k) for k in range(3)]
    r = (mu + nu @ (g[2] + g[1] + g[0]) + commutator(nu, Sg)) @ g[1] + (n + 1) * data.I()
    return norm(to_double(r))


@dataclass
class LatticeRun:
    gammas: list
    variant: str
    events: list = field(default_factory=list)

    @property
    def halted(self) -> bool:
        return bool(self.events)


def dPI_iterate(gamma1, mu, n_max: int, variant: str = "derived", nu=None, gamma0=None) -> LatticeRun:
    """Forward iteration of the dPI lattice from ``gamma_0 = 0`` and ``gamma_1``.

    ``derived`` solves the general equation for ``gamma_{n+1}``::

        gamma_{n+1} = nu^{-1} (-n gamma_n^{-1} - mu - [nu, sum_{k<n-1} gamma_k]) - gamma_n - gamma_{n-1}

    which for ``nu = -I`` is ``n gamma_n^{-1} - gamma_n - gamma_{n-1} + mu``.
    ``printed`` uses ``gamma_{n+2} = n gamma_n^{-1} - gamma_n - gamma_{n-1} - mu``
    (``nu = -I`` only, ``gamma_{-1} = 0``, the ``n gamma_n^{-1}`` term dropped at
    ``n = 0``).  A singular ``gamma_n`` stops the run with a logged event.
    """
    gamma1 = np.asarray(gamma1)
    N = gamma1.shape[0]
    I = eye(N, gamma1)
    mu = np.asarray(mu, dtype=gamma1.dtype)
    nu = -I if nu is None else np.asarray(nu, dtype=gamma1.dtype)
    g = [zeros((N, N), gamma1) if gamma0 is None else np.asarray(gamma0), gamma1]
    run = LatticeRun(g, variant)

    def ginv(n):
        try:
            return inv(g[n])
        except SingularMatrixError:
            run.events.append({"event": "singular gamma", "n": n})
            log.warning("dPI iteration: gamma_%d singular, halting", n)
            return None

    if variant == "derived":
        nu_inv = inv(nu)
        Sg = zeros((N, N), gamma1)  # sum_{k<n-1} gamma_k
        for n in range(1, n_max):
            gi = ginv(n)
            if gi is None:
                break
            nxt = nu_inv @ (-n * gi - mu - commutator(nu, Sg)) - g[n] - g[n - 1]
            g.append(nxt)
            Sg = Sg + g[n - 1]
    elif variant == "printed":
        if norm(to_double(nu + I)) > 0:
            raise ValueError("the printed dPI recursion is stated for nu = -I")
        # gamma_2 comes from the n = 0 step; gamma_{-1} = 0
        g.append(-g[0] - mu)
        for n in range(1, n_max - 1):
            gi = ginv(n)
            if gi is None:
                break
            g.append(n * gi - g[n] - g[n - 1] - mu)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    run.gammas = g[: n_max + 1]
    return run


def magnus_dpi_residual(gamma, t, n) -> float:
    """``|gamma_n (gamma_{n-1} + gamma_n + gamma_{n+1}) + 2 t gamma_n - n|`` (scalar)."""
    gm = gamma[n - 1] if n >= 1 else 0.0
    return abs(gamma[n] * (gm + gamma[n] + gamma[n + 1]) + 2 * t * gamma[n] - n)


@dataclass
class OracleComparison:
    variant: str
    diffs: list
    divergence_index: int | None
    events: list

    @property
    def max_diff(self) -> float:
        return max(self.diffs) if self.diffs else 0.0


DIVERGENCE = 1e-4


def lattice_vs_oracle(data: RecurrenceData, mu, n_max: int, variant: str = "derived", nu=None) -> OracleComparison:
    """Iterate from the oracle ``gamma_1`` and compare with oracle ``gamma_n`` for ``n <= n_max``."""
    if n_max > data.n_top - 1:
        raise IndexError(f"oracle data reach n={data.n_top - 1}, asked for {n_max}")
    ref = data._ref()
    mu = np.asarray(mu, dtype=ref.dtype)
    nu = None if nu is None else np.asarray(nu, dtype=ref.dtype)
    run = dPI_iterate(_gamma(data, 1), mu, n_max, variant, nu=nu, gamma0=_gamma(data, 0))
    diffs, div = [], None
    for n, gl in enumerate(run.gammas):
        dn = norm(to_double(gl - _gamma(data, n)))
        diffs.append(dn)
        if div is None and dn > DIVERGENCE:
            div = n
    return OracleComparison(variant, diffs, div, run.events)
