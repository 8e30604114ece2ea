"""Parametrised contours and composite Gauss-Legendre rules on them.

A contour is a map ``t -> z(t)`` on a truncated parameter interval
``[-T, T]``.  Rules carry complex weights that already include ``z'(t)``, the
orientation sign and the moment normalisation factor (``1/(2 pi i)`` for the
"paper" convention, ``1`` for "plain").
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from .mxcore import MoprhError, is_extended, max_abs, to_extended, use_extended

KINDS = ("real-line", "hyperbola")
NORMALIZATIONS = ("paper", "plain")
DECAY_TOL = 1e-8


class ContourError(MoprhError, ValueError):
    pass


@dataclass(frozen=True)
class Contour:
    """Contour geometry.

    ``real-line``: ``z = t``.
    ``hyperbola``: the branch ``3x^2 - y^2 = 3`` with ``x > 0``,
    ``z = cosh t + i sqrt(3) sinh t``; ``reflect=True`` takes the ``x < 0``
    branch ``z = -cosh t + i sqrt(3) sinh t``.
    ``orientation=-1`` reverses the direction of travel.
    """

    kind: str = "real-line"
    T: float = 8.0
    reflect: bool = False
    orientation: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContourError(f"unknown contour kind {self.kind!r}; expected one of {KINDS}")
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ContourError("truncation parameter T must be positive and finite")
        if self.orientation not in (1, -1):
            raise ContourError("orientation must be +1 or -1")
        if self.reflect and self.kind != "hyperbola":
            raise ContourError("reflection only applies to the hyperbola branch")

    def z(self, t):
        t = np.asarray(t)
        if self.kind == "real-line":
            return t + 0j if t.dtype != object else t
        if t.dtype == object:
            sgn = -1 if self.reflect else 1
            ch = np.vectorize(mpmath.cosh, otypes=[object])(t)
            sh = np.vectorize(mpmath.sinh, otypes=[object])(t)
            return sgn * ch + mpmath.mpc(0, 1) * mpmath.sqrt(3) * sh
        sgn = -1.0 if self.reflect else 1.0
        return sgn * np.cosh(t) + 1j * math.sqrt(3.0) * np.sinh(t)

    def dz(self, t):
        t = np.asarray(t)
        if self.kind == "real-line":
            if t.dtype == object:
                return np.full(t.shape, mpmath.mpc(1), dtype=object)
            return np.ones(t.shape, dtype=complex)
        if t.dtype == object:
            sgn = -1 if self.reflect else 1
            ch = np.vectorize(mpmath.cosh, otypes=[object])(t)
            sh = np.vectorize(mpmath.sinh, otypes=[object])(t)
            return sgn * sh + mpmath.mpc(0, 1) * mpmath.sqrt(3) * ch
        sgn = -1.0 if self.reflect else 1.0
        return sgn * np.sinh(t) + 1j * math.sqrt(3.0) * np.cosh(t)

    @property
    def midpoint(self) -> complex:
        return complex(self.z(np.array(0.0)))

    def left_normal(self, t) -> np.ndarray:
        """Unit normal pointing to the left of the direction of travel."""
        d = np.asarray(self.dz(t), dtype=complex) * self.orientation
        return 1j * d / np.abs(d)

    def distance(self, z0: complex) -> float:
        """Distance from ``z0`` to the truncated contour."""
        z0 = complex(z0)
        if self.kind == "real-line":
            x = min(max(z0.real, -self.T), self.T)
            return abs(z0 - x)
        ts = np.linspace(-self.T, self.T, 4001)
        d = np.abs(self.z(ts) - z0)
        i = int(np.argmin(d))
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, len(ts) - 1)]
        if hi <= lo:
            return float(d[i])
        r = minimize_scalar(lambda s: abs(complex(self.z(np.array(s))) - z0),
                            bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
        return float(min(r.fun, d[i]))


def gauss_legendre(order: int, extended: bool = False):
    """Reference Gauss-Legendre nodes and weights on [-1, 1]."""
    if order < 1:
        raise ContourError("quadrature order must be at least 1")
    x, w = np.polynomial.legendre.leggauss(order)
    if not extended:
        return x, w
    use_extended()
    xs, ws = [], []
    for x0 in x:
        r = mpmath.mpf(x0)
        for _ in range(100):
            p0, p1 = mpmath.mpf(1), r
            for k in range(2, order + 1):
                p0, p1 = p1, ((2 * k - 1) * r * p1 - (k - 1) * p0) / k
            dp = order * (r * p1 - p0) / (r * r - 1)
            step = p1 / dp
            r -= step
            if abs(step) < mpmath.mpf(2) ** (-mpmath.mp.prec + 4):
                break
        p0, p1 = mpmath.mpf(1), r
        for k in range(2, order + 1):
            p0, p1 = p1, ((2 * k - 1) * r * p1 - (k - 1) * p0) / k
        dp = order * (r * p1 - p0) / (r * r - 1)
        xs.append(r)
        ws.append(2 / ((1 - r * r) * dp * dp))
    return np.array(xs, dtype=object), np.array(ws, dtype=object)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Composite rule on a contour.

    ``nodes`` are points ``z(t)``; ``weights`` include ``z'(t)``, orientation
    and the normalisation factor ``kappa``; ``raw`` holds the weights without
    ``kappa``.
    """

    contour: Contour
    edges: np.ndarray
    order: int
    normalization: str
    t: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    raw: np.ndarray
    kappa: complex
    extended: bool = False
    panel: np.ndarray = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    def integrate(self, values):
        """Integrate nodal values of shape (n, ...) with the normalised weights."""
        values = np.asarray(values)
        w = self.weights.reshape((-1,) + (1,) * (values.ndim - 1))
        return (w * values).sum(axis=0)

    def refined_near(self, z0: complex, ratio: float = 1.0, max_depth: int = 30) -> "QuadratureRule":
        """Bisect panels whose length exceeds ``ratio`` times their distance to ``z0``."""
        edges = list(np.asarray(self.edges, dtype=float))
        out = []
        c = self.contour
        stack = [(a, b, 0) for a, b in zip(edges[:-1], edges[1:])][::-1]
        while stack:
            a, b, depth = stack.pop()
            mid = 0.5 * (a + b)
            za, zm, zb = (complex(c.z(np.array(s))) for s in (a, mid, b))
            length = abs(zm - za) + abs(zb - zm)
            dist = min(abs(z0 - za), abs(z0 - zb), abs(z0 - zm))
            if length > ratio * dist and depth < max_depth:
                stack.append((mid, b, depth + 1))
                stack.append((a, mid, depth + 1))
            else:
                out.append(a)
        out.append(edges[-1])
        return rule_from_edges(c, np.array(out), self.order, self.normalization, self.extended)


def _kappa(normalization: str, extended: bool):
    if normalization not in NORMALIZATIONS:
        raise ContourError(f"unknown normalisation {normalization!r}")
    if normalization == "plain":
        return mpmath.mpc(1) if extended else 1.0 + 0j
    if extended:
        return 1 / (2 * mpmath.pi * mpmath.mpc(0, 1))
    return 1.0 / (2j * math.pi)


def rule_from_edges(contour: Contour, edges, order: int, normalization: str = "paper",
                    extended: bool = False) -> QuadratureRule:
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ContourError("panel edges must be strictly increasing")
    x, w = gauss_legendre(order, extended)
    if extended:
        e = to_extended(edges)
        e = np.array([v.real for v in e], dtype=object)
    else:
        e = edges
    a, b = e[:-1], e[1:]
    half, mid = (b - a) / 2, (b + a) / 2
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    gw = (half[:, None] * w[None, :]).ravel()
    panel = np.repeat(np.arange(edges.size - 1), order)
    nodes = contour.z(t)
    raw = gw * contour.dz(t) * contour.orientation
    kappa = _kappa(normalization, extended)
    return QuadratureRule(contour, edges, order, normalization, t, nodes, raw * kappa, raw,
                          kappa, extended, panel)


def build_rule(contour: Contour, panels: int = 64, order: int = 20, normalization: str = "paper",
               precision: str = "double") -> QuadratureRule:
    """Composite Gauss-Legendre rule with ``panels`` equal panels on ``[-T, T]``."""
    if panels < 1:
        raise ContourError("need at least one panel")
    if precision not in ("double", "extended"):
        raise ContourError(f"unknown precision {precision!r}")
    edges = np.linspace(-contour.T, contour.T, panels + 1)
    return rule_from_edges(contour, edges, order, normalization, precision == "extended")


@dataclass(frozen=True)
class DecayReport:
    ok: bool
    endpoint_norms: dict
    tolerance: float

    @property
    def worst(self) -> float:
        return max(self.endpoint_norms.values())


def decay_check(weight, rule_or_contour, tol: float = DECAY_TOL) -> DecayReport:
    """Check that ``W``, ``W' - 2 h^L W`` and ``W' - 2 W h^R`` vanish at both ends.

    ``weight`` is a weight object (see ``weights.Weight``) or a bare callable
    of ``z`` returning ``W(z)``; for a bare callable only ``W`` is checked.
    """
    contour = rule_or_contour.contour if isinstance(rule_or_contour, QuadratureRule) else rule_or_contour
    ends = np.array([-contour.T, contour.T])
    norms = {}
    if hasattr(weight, "at_t"):
        W = weight.at_t(ends)
        dW = weight.derivative_at_t(ends)
        zs = contour.z(ends)
        hl, hr = weight.hL(zs), weight.hR(zs)
        for side, k in (("start", 0), ("end", 1)):
            norms[f"W@{side}"] = max_abs(W[k])
            norms[f"W'-2hL W@{side}"] = max_abs(dW[k] - 2 * hl[k] @ W[k])
            norms[f"W'-2W hR@{side}"] = max_abs(dW[k] - 2 * W[k] @ hr[k])
    else:
        zs = contour.z(ends)
        for side, k in (("start", 0), ("end", 1)):
            norms[f"W@{side}"] = max_abs(np.asarray(weight(zs[k])))
    ok = all(math.isfinite(v) and v <= tol for v in norms.values())
    return DecayReport(ok, norms, tol)


def nodal_values(rule: QuadratureRule, f):
    """Evaluate ``f`` (callable of ``z``) at the rule nodes."""
    return np.asarray(f(rule.nodes))


def is_extended_rule(rule: QuadratureRule) -> bool:
    return rule.extended or is_extended(rule.nodes)
