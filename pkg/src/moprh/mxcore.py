"""Dense complex block algebra.

Matrix polynomials, truncated matrix Laurent series in ``1/z``, commutators,
the Miura map and guarded linear solves.  Arrays are numpy ``complex128`` in
double precision or numpy ``object`` arrays of ``mpmath.mpc`` in extended
precision; every routine here accepts either.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
import scipy.linalg

EXTENDED_DPS = 40  # about 133 bits of significand
SINGULAR_FACTOR = 1e3


class MoprhError(Exception):
    """Base class for library errors."""


class DimensionError(MoprhError, ValueError):
    pass


class SingularMatrixError(MoprhError, ArithmeticError):
    pass


class TruncationError(MoprhError, ValueError):
    pass


# ---------------------------------------------------------------- precision

def use_extended():
    """Raise the global mpmath working precision to the extended level."""
    if mpmath.mp.dps < EXTENDED_DPS:
        mpmath.mp.dps = EXTENDED_DPS


def is_extended(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype == object


def to_extended(a) -> np.ndarray:
    use_extended()
    a = np.asarray(a)
    if a.dtype == object:
        return np.vectorize(mpmath.mpc, otypes=[object])(a) if a.size else a
    a = a.astype(complex)
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = mpmath.mpc(v.real, v.imag)
    return out


def to_double(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype != object:
        return a.astype(complex)
    out = np.empty(a.shape, dtype=complex)
    for idx, v in np.ndenumerate(a):
        out[idx] = complex(v)
    return out


def like(a, ref):
    """Cast ``a`` to the precision of ``ref``."""
    return to_extended(a) if is_extended(ref) else to_double(a)


def machine_eps(ref=None) -> float:
    if ref is not None and is_extended(ref):
        return float(mpmath.mpf(2) ** (-mpmath.mp.prec))
    return float(np.finfo(float).eps)


def zeros(shape, ref=None) -> np.ndarray:
    z = np.zeros(shape, dtype=complex)
    return to_extended(z) if ref is not None and is_extended(ref) else z


def eye(N: int, ref=None) -> np.ndarray:
    e = np.eye(N, dtype=complex)
    return to_extended(e) if ref is not None and is_extended(ref) else e


def cmatrix(a, N: int | None = None) -> np.ndarray:
    """Validate and return a square complex matrix (scalars become 1x1)."""
    a = np.asarray(a)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if N is not None and a.shape[0] != N:
        raise DimensionError(f"expected {N}x{N}, got {a.shape}")
    return a if a.dtype == object else a.astype(complex)


def norm(a) -> float:
    """Frobenius norm of the whole array, returned as a Python float."""
    a = np.asarray(a)
    if a.dtype == object:
        s = mpmath.mpf(0)
        for v in a.flat:
            s += abs(v) ** 2
        return float(mpmath.sqrt(s))
    return float(np.linalg.norm(a.ravel()))


def max_abs(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.dtype == object:
        return float(max(abs(v) for v in a.flat))
    return float(np.max(np.abs(a)))


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    return a @ b + b @ a


def exp(a):
    """Elementwise exponential in the precision of ``a``."""
    a = np.asarray(a)
    if a.dtype == object:
        return np.vectorize(mpmath.exp, otypes=[object])(a)
    return np.exp(a)


def expm(a):
    """Matrix exponential of one matrix or a stack (..., N, N)."""
    a = np.asarray(a)
    if a.dtype != object:
        return scipy.linalg.expm(a)
    out = np.empty(a.shape, dtype=object)
    for idx in np.ndindex(a.shape[:-2]):
        m = a[idx]
        if m.shape[-1] == 1:
            out[idx] = np.array([[mpmath.exp(m[0, 0])]], dtype=object)
        else:
            out[idx] = np.array(mpmath.expm(mpmath.matrix(m.tolist())).tolist(), dtype=object)
    return out


# ------------------------------------------------------------- linear solves

def _mp(a):
    return mpmath.matrix(np.asarray(a).tolist())


def _from_mp(m, shape):
    return np.array(m.tolist(), dtype=object).reshape(shape)


def condition_number(a) -> float:
    """Condition number (2-norm in double, Frobenius product in extended)."""
    a = cmatrix(a)
    if a.dtype != object:
        s = np.linalg.svd(a, compute_uv=False)
        return float(s[0] / s[-1]) if s[-1] > 0 else math.inf
    try:
        ai = mpmath.inverse(_mp(a))
    except ZeroDivisionError:
        return math.inf
    return norm(a) * norm(_from_mp(ai, a.shape))


def inv(a):
    """Inverse with a singularity guard at ``1e3 * eps * ||a||``."""
    a = cmatrix(a)
    eps = machine_eps(a)
    if a.dtype != object:
        s = np.linalg.svd(a, compute_uv=False)
        if s[-1] <= SINGULAR_FACTOR * eps * s[0] or s[0] == 0:
            raise SingularMatrixError(f"matrix is numerically singular (sigma_min={s[-1]:.3e})")
        return np.linalg.inv(a)
    try:
        ai = _from_mp(mpmath.inverse(_mp(a)), a.shape)
    except ZeroDivisionError as exc:
        raise SingularMatrixError("matrix is singular") from exc
    na, nai = norm(a), norm(ai)
    if na == 0 or 1.0 / nai <= SINGULAR_FACTOR * eps * na:
        raise SingularMatrixError("matrix is numerically singular")
    return ai


def det(a):
    a = cmatrix(a)
    if a.dtype != object:
        return complex(np.linalg.det(a))
    return mpmath.det(_mp(a))


@dataclass(frozen=True, eq=False)
class LinearSolve:
    x: np.ndarray
    residual: float
    condition: float


def solve_linear(a, b) -> LinearSolve:
    """Solve ``a x = b`` and report the relative residual and conditioning."""
    a = cmatrix(a)
    b = np.asarray(b)
    if b.shape[0] != a.shape[0]:
        raise DimensionError(f"rhs has {b.shape[0]} rows, matrix has {a.shape[0]}")
    cond = condition_number(a)
    if not math.isfinite(cond) or cond * machine_eps(a) * SINGULAR_FACTOR >= 1.0:
        raise SingularMatrixError(f"linear system is numerically singular (cond={cond:.3e})")
    if a.dtype != object:
        x = np.linalg.solve(a, b.astype(complex))
    else:
        bb = b.reshape(b.shape[0], -1)
        cols = [mpmath.lu_solve(_mp(a), mpmath.matrix(bb[:, j].tolist())) for j in range(bb.shape[1])]
        x = np.empty(bb.shape, dtype=object)
        for j, c in enumerate(cols):
            x[:, j] = [c[i] for i in range(bb.shape[0])]
        x = x.reshape(b.shape)
    scale = norm(a) * norm(x) + norm(b)
    res = norm(a @ x - b) / scale if scale > 0 else 0.0
    return LinearSolve(x, res, cond)


# ------------------------------------------------------------ block helpers

def split_blocks(a):
    """Split a 2N x 2N array (or stack) into its four N x N blocks."""
    n2 = a.shape[-1]
    if n2 % 2:
        raise DimensionError("block split needs an even dimension")
    N = n2 // 2
    return ((a[..., :N, :N], a[..., :N, N:]), (a[..., N:, :N], a[..., N:, N:]))


def join_blocks(b11, b12, b21, b22):
    top = np.concatenate([b11, b12], axis=-1)
    bot = np.concatenate([b21, b22], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def block_diag2(a, b):
    z = zeros(a.shape, a) if is_extended(a) or is_extended(b) else np.zeros_like(a, dtype=complex)
    return join_blocks(a, z, z.copy(), b)


# --------------------------------------------------------- matrix polynomials

@dataclass(frozen=True, eq=False)
class MatrixPoly:
    """Polynomial ``sum_k coeffs[k] z**k`` with N x N matrix coefficients."""

    coeffs: np.ndarray
    __array_ufunc__ = None  # let numpy defer to the reflected operators

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[0] == 0:
            raise DimensionError(f"coefficient array must be (d+1, N, N), got {c.shape}")
        if c.dtype != object:
            c = c.astype(complex)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_list(cls, coeffs, N: int | None = None):
        mats = [cmatrix(c, N) for c in coeffs]
        Ns = {m.shape[0] for m in mats}
        if len(Ns) != 1:
            raise DimensionError("coefficient sizes disagree")
        if any(m.dtype == object for m in mats):
            mats = [to_extended(m) for m in mats]
        return cls(np.stack(mats))

    @classmethod
    def constant(cls, a):
        return cls(cmatrix(a)[None])

    @classmethod
    def identity_z(cls, N: int, ref=None):
        """The polynomial ``z I``."""
        c = zeros((2, N, N), ref)
        c[1] = eye(N, ref)
        return cls(c)

    @property
    def N(self) -> int:
        return self.coeffs.shape[1]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def extended(self) -> bool:
        return self.coeffs.dtype == object

    def __call__(self, z):
        """Evaluate by Horner; ``z`` scalar or array gives (..., N, N)."""
        z = np.asarray(z)
        zz = z[..., None, None]
        out = np.broadcast_to(self.coeffs[-1], z.shape + self.coeffs.shape[1:]).copy()
        for c in self.coeffs[-2::-1]:
            out = out * zz + c
        return out

    def derivative(self, order: int = 1) -> "MatrixPoly":
        c = self.coeffs
        for _ in range(order):
            if c.shape[0] == 1:
                c = zeros(c.shape, c)
            else:
                k = np.arange(1, c.shape[0])
                c = c[1:] * k[:, None, None]
        return MatrixPoly(c)

    def _pad(self, d):
        c = self.coeffs
        if c.shape[0] >= d + 1:
            return c
        extra = zeros((d + 1 - c.shape[0],) + c.shape[1:], c)
        return np.concatenate([c, extra])

    def _coerce(self, other):
        if isinstance(other, MatrixPoly):
            return other
        return MatrixPoly.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        d = max(self.degree, other.degree)
        return MatrixPoly(self._pad(d) + other._pad(d))

    __radd__ = __add__

    def __neg__(self):
        return MatrixPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, s):
        if isinstance(s, (MatrixPoly, np.ndarray)):
            raise TypeError("use @ for matrix products")
        return MatrixPoly(self.coeffs * s)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, MatrixPoly):
            a, b = self.coeffs, other.coeffs
            out = zeros((a.shape[0] + b.shape[0] - 1, self.N, self.N), a if is_extended(a) else b)
            for i in range(a.shape[0]):
                out[i:i + b.shape[0]] += a[i] @ b
            return MatrixPoly(out)
        return MatrixPoly(self.coeffs @ cmatrix(other, self.N))

    def __rmatmul__(self, other):
        return MatrixPoly(cmatrix(other, self.N) @ self.coeffs)

    def coefficient(self, k: int):
        if 0 <= k <= self.degree:
            return self.coeffs[k]
        return zeros((self.N, self.N), self.coeffs)

    def trimmed(self, tol: float = 0.0) -> "MatrixPoly":
        c = self.coeffs
        d = c.shape[0] - 1
        while d > 0 and max_abs(c[d]) <= tol:
            d -= 1
        return MatrixPoly(c[: d + 1])

    def blocks(self):
        (a, b), (c, d) = split_blocks(self.coeffs)
        return ((MatrixPoly(a), MatrixPoly(b)), (MatrixPoly(c), MatrixPoly(d)))

    @classmethod
    def from_blocks(cls, grid):
        (a, b), (c, d) = [[p if isinstance(p, MatrixPoly) else MatrixPoly.constant(p) for p in row]
                          for row in grid]
        deg = max(p.degree for p in (a, b, c, d))
        return cls(join_blocks(a._pad(deg), b._pad(deg), c._pad(deg), d._pad(deg)))

    def max_coeff_norm(self) -> float:
        return max(norm(c) for c in self.coeffs)


def poly_residual(p: MatrixPoly) -> float:
    """Largest coefficient norm, the coefficientwise size of an identity residual."""
    return p.max_coeff_norm()


def miura(h: MatrixPoly) -> MatrixPoly:
    """The Miura map ``h' + h^2``."""
    return h.derivative() + h @ h


# ------------------------------------------------------- Laurent series in 1/z

@dataclass(frozen=True, eq=False)
class LaurentBlock:
    """Matrix series ``sum_k pos[k] z**k + sum_k neg[k-1] z**-k``.

    ``order`` is the number of negative powers that are exact; ``inf`` marks a
    finite Laurent polynomial whose stored terms are complete.
    """

    pos: np.ndarray
    neg: np.ndarray
    order: float = math.inf
    __array_ufunc__ = None

    def __post_init__(self):
        p, n = np.asarray(self.pos), np.asarray(self.neg)
        if p.ndim != 3 or p.shape[0] == 0:
            raise DimensionError("positive part must be (d+1, N, N)")
        if n.ndim != 3:
            raise DimensionError("negative part must be (K, N, N)")
        if n.shape[0] and n.shape[1:] != p.shape[1:]:
            raise DimensionError("block sizes of positive and negative parts disagree")
        if self.order < 0:
            raise TruncationError("truncation order is negative")
        if math.isfinite(self.order) and n.shape[0] > self.order:
            n = n[: int(self.order)]
        object.__setattr__(self, "pos", p)
        object.__setattr__(self, "neg", n)

    @classmethod
    def from_poly(cls, p: MatrixPoly):
        return cls(p.coeffs, zeros((0,) + p.coeffs.shape[1:], p.coeffs), math.inf)

    @property
    def N(self) -> int:
        return self.pos.shape[1]

    @property
    def degree(self) -> int:
        return self.pos.shape[0] - 1

    def _sequence(self):
        # coefficients from the most negative stored power up to degree
        return np.concatenate([self.neg[::-1], self.pos]), self.neg.shape[0]

    def __matmul__(self, other: "LaurentBlock") -> "LaurentBlock":
        if isinstance(other, MatrixPoly):
            other = LaurentBlock.from_poly(other)
        if not isinstance(other, LaurentBlock):
            c = cmatrix(other, self.N)
            return LaurentBlock(self.pos @ c, self.neg @ c, self.order)
        a, ka = self._sequence()
        b, kb = other._sequence()
        order = min(self.order - other.degree, other.order - self.degree)
        if order < 0:
            raise TruncationError("product loses exactness in nonnegative powers")
        ref = a if is_extended(a) else b
        out = zeros((a.shape[0] + b.shape[0] - 1, self.N, self.N), ref)
        for i in range(a.shape[0]):
            out[i:i + b.shape[0]] += a[i] @ b
        shift = ka + kb  # index of power 0 in out
        pos = out[shift:]
        neg = out[:shift][::-1]
        if math.isfinite(order):
            neg = neg[: int(order)]
        return LaurentBlock(pos, neg, order)

    def __rmatmul__(self, other):
        c = cmatrix(other, self.N)
        return LaurentBlock(c @ self.pos, c @ self.neg, self.order)

    def __add__(self, other: "LaurentBlock") -> "LaurentBlock":
        d = max(self.degree, other.degree)
        k = max(self.neg.shape[0], other.neg.shape[0])
        order = min(self.order, other.order)

        def pad(x, n):
            if x.shape[0] >= n:
                return x
            return np.concatenate([x, zeros((n - x.shape[0],) + x.shape[1:], x)])

        neg = pad(self.neg, k) + pad(other.neg, k)
        return LaurentBlock(pad(self.pos, d + 1) + pad(other.pos, d + 1), neg, order)

    def __neg__(self):
        return LaurentBlock(-self.pos, -self.neg, self.order)

    def __sub__(self, other):
        return self + (-other)

    def coefficient(self, k: int):
        if 0 <= k <= self.degree:
            return self.pos[k]
        if k < 0:
            if -k > self.order:
                raise TruncationError(f"power {k} is beyond the truncation order")
            if -k <= self.neg.shape[0]:
                return self.neg[-k - 1]
        return zeros((self.N, self.N), self.pos)

    def positive_part(self) -> MatrixPoly:
        return MatrixPoly(self.pos.copy())

    def __call__(self, z):
        """Evaluate the stored terms at a scalar z."""
        out = MatrixPoly(self.pos)(z)
        w = 1 / z
        acc = w
        for c in self.neg:
            out = out + c * acc
            acc = acc * w
        return out


def series_inverse(s: LaurentBlock, K: int | None = None) -> LaurentBlock:
    """Inverse of ``I + S_1/z + S_2/z^2 + ...`` truncated at order ``K``."""
    N = s.N
    ident = eye(N, s.pos)
    if max_abs(s.pos[0] - ident) > 1e-12 * max(1.0, max_abs(s.pos[0])) or (
        s.degree > 0 and max_abs(s.pos[1:]) > 0
    ):
        raise TruncationError("series inverse needs the identity as leading block")
    order = s.order if K is None else min(s.order, K)
    if not math.isfinite(order):
        raise TruncationError("an explicit truncation order is needed for an exact series")
    order = int(order)
    S = [s.coefficient(-k) if k <= s.neg.shape[0] else zeros((N, N), s.pos) for k in range(1, order + 1)]
    V = [ident]
    for k in range(1, order + 1):
        acc = zeros((N, N), s.pos)
        for j in range(1, k + 1):
            acc = acc - S[j - 1] @ V[k - j]
        V.append(acc)
    neg = np.stack(V[1:]) if order else zeros((0, N, N), s.pos)
    return LaurentBlock(ident[None].copy(), neg, order)


def positive_part(s: LaurentBlock) -> MatrixPoly:
    return s.positive_part()
