"""Second-kind functions as Cauchy transforms of ``P_n W``.

``Q^L_n(z) = kappa int P^L_n(z') W(z') / (z' - z) dz'`` and
``Q^R_n(z) = kappa int W(z') P^R_n(z') / (z' - z) dz'``, with ``Q_{-1} = -I``.
Integrals are evaluated on the base rule; panels that come closer to the
evaluation point than their own length are bisected and re-sampled, which
keeps the quadrature accurate down to small clearances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .biorth import RecurrenceData, associated_first_kind
from .contour import ContourError, QuadratureRule, gauss_legendre
from .mxcore import eye, norm, to_double, zeros
from .weights import Weight

CLEARANCE = 0.1
REFINE_RATIO = 1.0
JUMP_EPS = (1e-2, 5e-3, 2.5e-3)


@dataclass(frozen=True, eq=False)
class SecondKindEval:
    n: int
    z: complex
    QL: np.ndarray
    QR: np.ndarray
    method: str


class SecondKind:
    """Evaluator for ``Q_n`` bound to one weight, rule and recurrence data.

    Everything here runs in double precision; extended data are rounded.
    """

    def __init__(self, data: RecurrenceData, weight: Weight, rule: QuadratureRule):
        if rule.extended:
            raise ContourError("second-kind evaluation uses a double-precision rule")
        self.data = data
        self.weight = weight
        self.rule = rule
        self.N = data.N
        self.kappa = complex(rule.kappa)
        self._W = np.asarray(weight.at_t(rule.t), dtype=complex)
        self._PL = {}
        self._PR = {}
        self._poly = {}
        self._gl = gauss_legendre(rule.order)
        c = rule.contour
        e = np.asarray(rule.edges, dtype=float)
        mids = 0.5 * (e[:-1] + e[1:])
        self._pz = (c.z(e[:-1]), c.z(mids), c.z(e[1:]))
        self._plen = np.abs(self._pz[1] - self._pz[0]) + np.abs(self._pz[2] - self._pz[1])

    # --------------------------------------------------------------- helpers
    def poly(self, n, side):
        key = (n, side)
        if key not in self._poly:
            P = self.data.P(n, side)
            self._poly[key] = P if not self.data.extended else type(P)(to_double(P.coeffs))
        return self._poly[key]

    def density_at_nodes(self, n, side):
        cache = self._PL if side == "L" else self._PR
        if n not in cache:
            P = self.poly(n, side)(self.rule.nodes)
            cache[n] = P @ self._W if side == "L" else self._W @ P
        return cache[n]

    def density_at_t(self, n, side, t):
        z = self.rule.contour.z(t)
        P = self.poly(n, side)(z)
        W = np.asarray(self.weight.at_t(t), dtype=complex)
        return P @ W if side == "L" else W @ P

    def _flagged_panels(self, z0):
        d = np.minimum(np.minimum(np.abs(self._pz[0] - z0), np.abs(self._pz[1] - z0)),
                       np.abs(self._pz[2] - z0))
        return np.nonzero(self._plen > REFINE_RATIO * d)[0]

    def _panel_integral(self, a, b, z0, fn, power, depth=0):
        c = self.rule.contour
        mid = 0.5 * (a + b)
        za, zm, zb = (complex(c.z(np.array(s))) for s in (a, mid, b))
        length = abs(zm - za) + abs(zb - zm)
        dist = min(abs(z0 - za), abs(z0 - zm), abs(z0 - zb))
        if length > REFINE_RATIO * dist and depth < 40:
            return (self._panel_integral(a, mid, z0, fn, power, depth + 1)
                    + self._panel_integral(mid, b, z0, fn, power, depth + 1))
        x, w = self._gl
        half = 0.5 * (b - a)
        t = mid + half * x
        zt = c.z(t)
        wt = half * w * c.dz(t) * c.orientation * self.kappa
        vals = fn(t)
        k = (wt / (zt - z0) ** power)[:, None, None]
        return (k * vals).sum(axis=0)

    def cauchy(self, nodal, fn, z0, power=1, clearance=CLEARANCE):
        """``kappa int f(z') / (z' - z0)^power dz'`` with local refinement."""
        z0 = complex(z0)
        dist = self.rule.contour.distance(z0)
        if dist < clearance:
            raise ContourError(f"evaluation point {z0} is {dist:.2e} from the contour (< {clearance})")
        flagged = self._flagged_panels(z0)
        k = self.rule.weights / (self.rule.nodes - z0) ** power
        if flagged.size:
            k = k.copy()
            k[np.isin(self.rule.panel, flagged)] = 0
        out = (k[:, None, None] * nodal).sum(axis=0)
        e = np.asarray(self.rule.edges, dtype=float)
        for p in flagged:
            out = out + self._panel_integral(e[p], e[p + 1], z0, fn, power)
        return out

    # ---------------------------------------------------------------- values
    def Q(self, n, z, side="L", deriv=0, clearance=CLEARANCE):
        """``d^k/dz^k Q_n`` at ``z`` for ``k = deriv`` (0, 1 or 2)."""
        if n == -1:
            base = -eye(self.N)
            return base if deriv == 0 else 0 * base
        nodal = self.density_at_nodes(n, side)
        val = self.cauchy(nodal, lambda t: self.density_at_t(n, side, t), z, power=deriv + 1,
                          clearance=clearance)
        return math.factorial(deriv) * val

    def stieltjes(self, z, clearance=CLEARANCE):
        """``S_W(z) = kappa int W(z') / (z' - z) dz'``."""
        return self.Q(0, z, "L", clearance=clearance)

    def Q_series(self, n, z, side="L"):
        """Truncated large-``z`` expansion ``-sum_j m_j z^{-j-1}`` from projected moments."""
        if n == -1:
            return -eye(self.N)
        z = complex(z)
        arr = self.data.mL[n] if side == "L" else self.data.mR[n]
        arr = to_double(arr)
        out = zeros((self.N, self.N))
        for j in range(n, arr.shape[0]):
            out = out - arr[j] * z ** (-j - 1)
        return out

    def value(self, n, z, method="quadrature") -> SecondKindEval:
        if method == "quadrature":
            return SecondKindEval(n, complex(z), self.Q(n, z, "L"), self.Q(n, z, "R"), method)
        if method == "series":
            return SecondKindEval(n, complex(z), self.Q_series(n, z, "L"), self.Q_series(n, z, "R"), method)
        raise ValueError(f"unknown method {method!r}")

    # ------------------------------------------------------------- identities
    def jump_limit(self, n, t, side="L", eps=JUMP_EPS, fn=None):
        """Extrapolated ``F(x + e n) - F(x - e n)`` as ``e -> 0`` at ``x = z(t)``.

        ``eps`` is a halving sequence of offsets; a Richardson table removes
        one power of ``e`` per extra offset.  ``fn(z)`` defaults to ``Q_n``.
        """
        c = self.rule.contour
        x = complex(c.z(np.array(t)))
        nrm = complex(c.left_normal(np.array(t)))
        f = fn if fn is not None else (lambda z: self.Q(n, z, side, clearance=0.0))
        return richardson([f(x + e * nrm) - f(x - e * nrm) for e in eps], eps)

    def jump_residual(self, n, t, side="L", eps=JUMP_EPS) -> float:
        """``|| (Q_+ - Q_-) - 2 pi i kappa P_n W ||`` at the contour point ``z(t)``."""
        limit = self.jump_limit(n, t, side, eps)
        expected = self.density_at_t(n, side, np.array([t]))[0] * (2j * math.pi * self.kappa)
        return norm(limit - expected)

    def hermite_pade_residual(self, n, z, side="L") -> float:
        """``|| P_n S_W + P^{(1)}_{n-1} - Q_n ||`` (right version mirrored)."""
        S = self.stieltjes(z)
        P = self.poly(n, side)(complex(z))
        A = associated_first_kind(self.data, n, side)
        A = type(A)(to_double(A.coeffs))(complex(z))
        lhs = P @ S + A if side == "L" else S @ P + A
        return norm(lhs - self.Q(n, z, side))

    def recurrence_residual(self, n, z, side="L") -> float:
        """Three-term relation for ``Q`` at an off-contour point."""
        d = self.data
        b = to_double(d.beta(n, side))
        g = to_double(d.gamma(n, side))
        z = complex(z)
        Qn, Qn1, Qm1 = self.Q(n, z, side), self.Q(n + 1, z, side), self.Q(n - 1, z, side)
        if side == "L":
            r = z * Qn - Qn1 - b @ Qn - g @ Qm1
        else:
            r = z * Qn - Qn1 - Qn @ b - Qm1 @ g
        return norm(r)


def richardson(values, eps):
    """Richardson table for ``D(e) = D0 + a_1 e + a_2 e^2 + ...`` sampled at ``eps``."""
    table = list(values)
    eps = list(eps)
    for level in range(1, len(table)):
        table = [(eps[i] * table[i + 1] - eps[i + level] * table[i]) / (eps[i] - eps[i + level])
                 for i in range(len(table) - 1)]
    return table[0]
