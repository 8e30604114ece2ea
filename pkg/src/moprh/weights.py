"""Matrix weights from a two-sided Pearson equation and their moments.

The weight is ``W = W^L W^R`` with ``(W^L)' = h^L W^L`` and
``(W^R)' = W^R h^R``, so that ``W' = h^L W + W h^R``.  Factors are fixed by
their values at the contour midpoint.  When all coefficients of a factor's
polynomial commute the factor is a matrix exponential of the antiderivative;
otherwise it is integrated with an adaptive Runge-Kutta method.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from .contour import Contour, QuadratureRule
from .mxcore import (
    DimensionError,
    MatrixPoly,
    MoprhError,
    commutator,
    expm,
    is_extended,
    max_abs,
    miura,
    norm,
    to_extended,
    zeros,
)

RK_RTOL = 1e-12
RK_ATOL = 1e-14
COMMUTE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class PearsonSpec:
    """Pearson data ``(h^L, h^R)`` with initial factors at the base point."""

    hL: MatrixPoly
    hR: MatrixPoly
    WL0: np.ndarray | None = None
    WR0: np.ndarray | None = None

    def __post_init__(self):
        if self.hL.N != self.hR.N:
            raise DimensionError("h^L and h^R must have the same block size")
        N = self.hL.N
        for name in ("WL0", "WR0"):
            v = getattr(self, name)
            if v is None:
                object.__setattr__(self, name, np.eye(N, dtype=complex))
            else:
                v = np.asarray(v, dtype=complex)
                if v.shape != (N, N):
                    raise DimensionError(f"{name} must be {N}x{N}")
                object.__setattr__(self, name, v)

    @property
    def N(self) -> int:
        return self.hL.N

    @property
    def degree(self) -> int:
        return max(self.hL.degree, self.hR.degree)


def factor_orbit_shift(spec: PearsonSpec, phi) -> PearsonSpec:
    """Move a constant nonsingular ``phi`` between the factors: ``W^L phi`` and ``phi^{-1} W^R``.

    ``W`` and ``(h^L, h^R)`` are unchanged.  A ``z``-dependent ``phi`` would
    leave the polynomial Pearson class, so callables must be constant.
    """
    if callable(phi):
        probes = [phi(z) for z in (0.0, 0.37 + 0.21j, -1.3)]
        if any(norm(np.asarray(v) - np.asarray(probes[0])) > 1e-14 * (1 + norm(probes[0])) for v in probes):
            raise ValueError("only constant phi keeps the Pearson data polynomial")
        phi = probes[0]
    phi = np.asarray(phi, dtype=complex)
    if phi.ndim == 0:
        phi = phi * np.eye(spec.N)
    if phi.shape != (spec.N, spec.N):
        raise DimensionError(f"phi must be {spec.N}x{spec.N}")
    if abs(np.linalg.det(phi)) < 1e-14 * max(1.0, norm(phi)) ** spec.N:
        raise MoprhError("phi is singular")
    return PearsonSpec(spec.hL, spec.hR, spec.WL0 @ phi, np.linalg.solve(phi, spec.WR0))


def symmetry_residual(weight, t, kind: str = "symmetric") -> float:
    """``max ||W - W^T||`` (or ``W - W^H``) over contour parameters ``t``."""
    W = weight.at_t(np.atleast_1d(np.asarray(t, dtype=float)))
    WT = np.swapaxes(W, -1, -2)
    if kind == "hermitian":
        WT = WT.conj()
    elif kind != "symmetric":
        raise ValueError(f"unknown reduction {kind!r}")
    return max_abs(W - WT)


def coefficients_commute(p: MatrixPoly, tol: float = COMMUTE_TOL) -> bool:
    c = p.coeffs
    scale = max(1.0, p.max_coeff_norm()) ** 2
    for i in range(c.shape[0]):
        for j in range(i + 1, c.shape[0]):
            if norm(commutator(c[i], c[j])) > tol * scale:
                return False
    return True


def antiderivative(p: MatrixPoly) -> MatrixPoly:
    c = p.coeffs
    out = zeros((c.shape[0] + 1,) + c.shape[1:], c)
    for k in range(c.shape[0]):
        out[k + 1] = c[k] / (k + 1)
    return MatrixPoly(out)


def _ext(a):
    return to_extended(a)


class Weight:
    """Evaluator for ``W = W^L W^R`` along a contour and off it.

    Use :func:`weight_eval` to construct.  ``method`` is ``"closed-form"`` or
    ``"rk"``.
    """

    def __init__(self, spec: PearsonSpec, contour: Contour, precision: str = "double"):
        self.spec = spec
        self.contour = contour
        self.precision = precision
        self.extended = precision == "extended"
        self.z0 = contour.midpoint
        self.closed_left = coefficients_commute(spec.hL)
        self.closed_right = coefficients_commute(spec.hR)
        self.method = "closed-form" if (self.closed_left and self.closed_right) else "rk"
        if self.extended and self.method != "closed-form":
            raise MoprhError("extended precision needs mutually commuting Pearson coefficients")
        if self.extended:
            self._hL = MatrixPoly(_ext(spec.hL.coeffs))
            self._hR = MatrixPoly(_ext(spec.hR.coeffs))
            self._WL0, self._WR0 = _ext(spec.WL0), _ext(spec.WR0)
            self._z0 = mpmath.mpc(self.z0)
        else:
            self._hL, self._hR = spec.hL, spec.hR
            self._WL0, self._WR0 = spec.WL0, spec.WR0
            self._z0 = self.z0
        self._HL = antiderivative(self._hL)
        self._HR = antiderivative(self._hR)
        self._HL0 = self._HL(self._z0)
        self._HR0 = self._HR(self._z0)
        self._sol = {}

    # ------------------------------------------------------------ polynomials
    def hL(self, z):
        return self._hL(z)

    def hR(self, z):
        return self._hR(z)

    # ------------------------------------------------------------ closed form
    def _left_closed(self, z):
        return expm(self._HL(z) - self._HL0) @ self._WL0

    def _right_closed(self, z):
        return self._WR0 @ expm(self._HR(z) - self._HR0)

    # -------------------------------------------------------------- integrator
    def _rhs(self, side, path, dpath):
        # gauged state (V, g) with W = exp(g) V and ||V|| held near its start
        N = self.spec.N
        h = self.spec.hL if side == "L" else self.spec.hR

        def f(s, y):
            V = y[:-1].reshape(N, N)
            hz = h(path(s)) * dpath(s)
            dV = hz @ V if side == "L" else V @ hz
            rate = np.vdot(V, dV).real / np.vdot(V, V).real
            return np.concatenate([(dV - rate * V).ravel(), [rate]])

        return f

    def _y0(self, side):
        W0 = self.spec.WL0 if side == "L" else self.spec.WR0
        return np.concatenate([W0.ravel().astype(complex), [0.0]])

    def _unpack(self, y):
        N = self.spec.N
        y = np.moveaxis(np.asarray(y), 0, -1)
        V = y[..., :-1].reshape(y.shape[:-1] + (N, N))
        return np.exp(y[..., -1].real)[..., None, None] * V

    def _integrate(self, f, span, y0, dense=False):
        sol = solve_ivp(f, span, y0, method="DOP853", rtol=RK_RTOL, atol=RK_ATOL,
                        dense_output=dense)
        if not sol.success:
            raise MoprhError(f"weight integration failed: {sol.message}")
        return sol

    def _contour_solution(self, side, sign):
        key = (side, sign)
        if key not in self._sol:
            c = self.contour
            f = self._rhs(side, lambda s: complex(c.z(np.array(s))), lambda s: complex(c.dz(np.array(s))))
            self._sol[key] = self._integrate(f, (0.0, sign * c.T), self._y0(side), dense=True).sol
        return self._sol[key]

    def _factor_rk_t(self, side, t):
        t = np.asarray(t, dtype=float)
        N = self.spec.N
        out = np.empty(t.shape + (N, N), dtype=complex)
        pos = t >= 0
        for sign, mask in ((1, pos), (-1, ~pos)):
            if np.any(mask):
                out[mask] = self._unpack(self._contour_solution(side, sign)(t[mask]))
        return out

    def _factor_rk_z(self, side, z):
        # straight path from the base point; the factors are entire
        z = complex(z)
        z0 = self.z0
        y0 = self._y0(side)
        if z == z0:
            return self._unpack(y0)
        f = self._rhs(side, lambda s: z0 + s * (z - z0), lambda s: (z - z0))
        sol = self._integrate(f, (0.0, 1.0), y0)
        return self._unpack(sol.y[:, -1])

    # ----------------------------------------------------------------- public
    def factors_at_t(self, t):
        """``(W^L, W^R)`` at contour parameters ``t``."""
        t = np.asarray(t)
        if self.method == "closed-form":
            if self.extended and t.dtype != object:
                t = np.array([mpmath.mpf(float(v)) for v in t.flat], dtype=object).reshape(t.shape)
            z = self.contour.z(t)
            return self._left_closed(z), self._right_closed(z)
        return self._factor_rk_t("L", t), self._factor_rk_t("R", t)

    def at_t(self, t):
        wl, wr = self.factors_at_t(t)
        return wl @ wr

    def factors_at_z(self, z):
        """``(W^L, W^R)`` at arbitrary complex points (scalar or array)."""
        z = np.asarray(z)
        if self.method == "closed-form":
            if self.extended and z.dtype != object:
                z = _ext(z)
            return self._left_closed(z), self._right_closed(z)
        flat = z.ravel()
        N = self.spec.N
        wl = np.stack([self._factor_rk_z("L", v) for v in flat]).reshape(z.shape + (N, N))
        wr = np.stack([self._factor_rk_z("R", v) for v in flat]).reshape(z.shape + (N, N))
        return wl, wr

    def at_z(self, z):
        wl, wr = self.factors_at_z(z)
        return wl @ wr

    def derivative_at_t(self, t):
        """``W'`` assembled from the factor derivatives at contour points."""
        wl, wr = self.factors_at_t(t)
        z = self.contour.z(np.asarray(t))
        return self.hL(z) @ wl @ wr + wl @ wr @ self.hR(z)

    def derivatives_at_z(self, z, orders=(1,), radius: float = 0.25, points: int = 48):
        """Complex derivatives of ``W`` at a point via the Cauchy integral formula.

        Independent of the Pearson equation: only values of ``W`` on a circle
        around ``z`` are used.
        """
        z = complex(z)
        theta = 2 * np.pi * np.arange(points) / points
        ring = z + radius * np.exp(1j * theta)
        vals = np.asarray(self.at_z(ring), dtype=complex)
        out = []
        for k in orders:
            fac = math.factorial(k) / radius ** k
            coef = np.exp(-1j * k * theta)[:, None, None]
            out.append(fac * (coef * vals).mean(axis=0))
        return out


def weight_eval(spec: PearsonSpec, contour: Contour, precision: str = "double") -> Weight:
    """Build the weight evaluator for ``spec`` along ``contour``."""
    return Weight(spec, contour, precision)


def nodal_weight(weight: Weight, rule: QuadratureRule):
    """``W`` at the rule nodes (cached on the rule's parameter values)."""
    return weight.at_t(rule.t)


@dataclass(frozen=True, eq=False)
class MomentTable:
    """Moments ``W_k`` for ``k = 0..K`` as a (K+1, N, N) array."""

    data: np.ndarray
    normalization: str

    @property
    def K(self) -> int:
        return self.data.shape[0] - 1

    @property
    def N(self) -> int:
        return self.data.shape[1]

    @property
    def extended(self) -> bool:
        return is_extended(self.data)

    def __getitem__(self, k):
        return self.data[k]


def moments(weight: Weight, rule: QuadratureRule, K: int, values=None) -> MomentTable:
    """Moments ``(normalised) sum_j w_j z_j^k W(z_j)`` for ``k = 0..K``."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    W = nodal_weight(weight, rule) if values is None else values
    if rule.extended and not is_extended(W):
        W = _ext(W)
    w = rule.weights
    weighted = w[:, None, None] * W
    zk = rule.nodes
    out = zeros((K + 1, weight.spec.N, weight.spec.N), W)
    out[0] = weighted.sum(axis=0)
    acc = weighted
    for k in range(1, K + 1):
        acc = acc * zk[:, None, None]
        out[k] = acc.sum(axis=0)
    return MomentTable(out, rule.normalization)


def pearson_residual(weight: Weight, z, method: str = "factors", override=None) -> float:
    """Residual ``||W' - h^L W - W h^R||`` at a point.

    ``method="factors"`` takes ``W'`` from the factor derivatives of the
    integrator; ``method="cauchy"`` differentiates ``W`` numerically with the
    Cauchy formula.  ``override`` replaces the value of ``W`` used on the
    right-hand side (for corruption tests).
    """
    z = complex(z)
    if method == "factors":
        wl, wr = weight.factors_at_z(np.array(z))
        wl, wr = np.asarray(wl, dtype=complex), np.asarray(wr, dtype=complex)
        hl, hr = weight.spec.hL(z), weight.spec.hR(z)
        dW = hl @ wl @ wr + wl @ wr @ hr
        W = wl @ wr
    elif method == "cauchy":
        (dW,) = weight.derivatives_at_z(z, orders=(1,))
        W = np.asarray(weight.at_z(np.array(z)), dtype=complex)
    else:
        raise ValueError(f"unknown method {method!r}")
    if override is not None:
        W = np.asarray(override, dtype=complex)
    hl, hr = weight.spec.hL(z), weight.spec.hR(z)
    return norm(dW - hl @ W - W @ hr)


def second_order_weight_residual(weight: Weight, z) -> float:
    """Residual of ``W'' - 2 (h^L W)' + M(h^L) W - W M(h^R)`` with Cauchy derivatives."""
    z = complex(z)
    dW, d2W = weight.derivatives_at_z(z, orders=(1, 2))
    W = np.asarray(weight.at_z(np.array(z)), dtype=complex)
    hL, hR = weight.spec.hL, weight.spec.hR
    hl_W_prime = hL.derivative()(z) @ W + hL(z) @ dW
    r = d2W - 2 * hl_W_prime + miura(hL)(z) @ W - W @ miura(hR)(z)
    return norm(r)


def second_order_weight_residual_right(weight: Weight, z) -> float:
    """Residual of ``W'' - 2 (W h^R)' + W M(h^R) - M(h^L) W``."""
    z = complex(z)
    dW, d2W = weight.derivatives_at_z(z, orders=(1, 2))
    W = np.asarray(weight.at_z(np.array(z)), dtype=complex)
    hL, hR = weight.spec.hL, weight.spec.hR
    W_hr_prime = dW @ hR(z) + W @ hR.derivative()(z)
    r = d2W - 2 * W_hr_prime + W @ miura(hR)(z) - miura(hL)(z) @ W
    return norm(r)


def default_truncation(spec: PearsonSpec, kind: str = "real-line", threshold: float = 1e-30,
                       reflect: bool = False, step: float = 0.25) -> float:
    """Smallest ``T`` (on a ``step`` grid) with ``||W(z(+-T))|| < threshold``."""
    probe_T = 14.0 if kind == "real-line" else 4.0
    w = Weight(spec, Contour(kind, probe_T, reflect))
    ts = np.arange(step, probe_T + step / 2, step)
    for T in ts:
        vals = w.at_t(np.array([-T, T]))
        tail = w.at_t(np.array([-min(T + 1, probe_T), min(T + 1, probe_T)]))
        if max_abs(vals) < threshold and max_abs(tail) < threshold:
            return float(T)
    raise MoprhError("weight does not decay below the threshold on the probe contour")
