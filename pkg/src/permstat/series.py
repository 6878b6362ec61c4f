"""Truncated formal power series over exact rationals or machine floats.

A :class:`PowerSeries` holds the coefficients ``a_0 .. a_N`` of a truncated
Taylor expansion.  The truncation order ``N`` is fixed at construction and is
never extended silently: reading ``s[N + 1]`` raises :class:`IndexError`.

Two scalar modes exist:

``exact``
    coefficients are ``int``/``Fraction`` or :class:`GaussianRational`
    (exact complex rationals); arithmetic is lossless.
``float``
    coefficients live in a read-only ``float64`` or ``complex128`` numpy
    array.  Any coefficient built from 1000 or more products is accumulated
    with :func:`math.fsum`, so long convolutions stay correctly rounded
    term-by-term rather than drifting.

Convolutions are the direct O(N^2) sums (sparse operands are exploited);
there is no FFT path.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

EXACT = "exact"
FLOAT = "float"
_MODES = (EXACT, FLOAT)

# Coefficient sums with at least this many terms are compensated.
FSUM_THRESHOLD = 1000


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, Rational):
            return GaussianRational(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, Rational):
            return GaussianRational(self.re * other, self.im * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return GaussianRational(self.re / other, self.im / other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return self * o.conjugate() / den

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return GaussianRational(1) / self ** (-e)
        out, base = GaussianRational(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


def is_exact_scalar(x) -> bool:
    return isinstance(x, (Rational, GaussianRational)) and not isinstance(x, bool)


def _exact(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, Rational) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"exact-mode coefficient must be rational, got {type(x).__name__}: {x!r}")


def to_complex(x) -> complex:
    return complex(x)


def fsum_complex(values) -> complex | float:
    """Correctly rounded sum of a float or complex array."""
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real), math.fsum(arr.imag))
    return math.fsum(arr)


def _dot(x: np.ndarray, y: np.ndarray):
    if len(x) >= FSUM_THRESHOLD:
        return fsum_complex(x * y)
    return np.dot(x, y)


class PowerSeries:
    """Immutable truncated power series ``a_0 + a_1 z + ... + a_N z^N``."""

    __slots__ = ("_c", "mode")

    def __init__(self, coeffs: Iterable, mode: str = EXACT):
        if mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
        if mode == EXACT:
            c = tuple(_exact(x) for x in coeffs)
        else:
            c = np.array(coeffs)
            if c.dtype == object:
                c = np.array([complex(x) if isinstance(x, GaussianRational) else x for x in c])
            c = c.astype(np.complex128 if np.iscomplexobj(c) else np.float64)
            c.flags.writeable = False
        if len(c) == 0:
            raise ValueError("a power series needs at least the constant coefficient")
        self._c = c
        self.mode = mode

    # construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, order: int, mode: str = EXACT) -> "PowerSeries":
        if mode == EXACT:
            return cls([0] * (order + 1), EXACT)
        return cls(np.zeros(order + 1), FLOAT)

    @classmethod
    def one(cls, order: int, mode: str = EXACT) -> "PowerSeries":
        if mode == EXACT:
            return cls([1] + [0] * order, EXACT)
        c = np.zeros(order + 1)
        c[0] = 1.0
        return cls(c, FLOAT)

    @classmethod
    def from_terms(cls, terms: dict[int, object], order: int, mode: str = EXACT) -> "PowerSeries":
        """Series with ``terms[k]`` at ``z**k`` (keys beyond ``order`` dropped)."""
        if mode == EXACT:
            c = [Fraction(0)] * (order + 1)
        else:
            cplx = any(isinstance(v, (complex, GaussianRational)) or np.iscomplexobj(v) for v in terms.values())
            c = np.zeros(order + 1, dtype=np.complex128 if cplx else np.float64)
        for k, v in terms.items():
            if 0 <= k <= order:
                c[k] = complex(v) if (mode == FLOAT and isinstance(v, GaussianRational)) else v
        return cls(c, mode)

    # access -----------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._c) - 1

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self._c[n]
        if not isinstance(n, (int, np.integer)):
            raise TypeError("series index must be an integer")
        if n < 0 or n > self.order:
            raise IndexError(f"coefficient {n} outside truncation order {self.order}")
        return self._c[n]

    @property
    def coeffs(self):
        """Coefficients as a tuple (exact) or a read-only ndarray (float)."""
        return self._c

    def tolist(self) -> list:
        return list(self._c)

    def is_complex(self) -> bool:
        if self.mode == FLOAT:
            return np.iscomplexobj(self._c)
        return any(isinstance(x, GaussianRational) for x in self._c)

    def to_float(self) -> "PowerSeries":
        if self.mode == FLOAT:
            return self
        if self.is_complex():
            return PowerSeries(np.array([complex(x) for x in self._c]), FLOAT)
        return PowerSeries(np.array([float(x) for x in self._c]), FLOAT)

    def nonzero_indices(self) -> list[int]:
        if self.mode == FLOAT:
            return np.flatnonzero(self._c).tolist()
        return [i for i, x in enumerate(self._c) if x != 0]

    # algebra -----------------------------------------------------------------

    def _check(self, other: "PowerSeries", same_order: bool = True):
        if not isinstance(other, PowerSeries):
            raise TypeError("expected a PowerSeries")
        if self.mode != other.mode:
            raise ValueError(f"series mode mismatch: {self.mode} vs {other.mode}")
        if same_order and self.order != other.order:
            raise ValueError(f"series order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        self._check(other)
        if self.mode == EXACT:
            return PowerSeries([a + b for a, b in zip(self._c, other._c)], EXACT)
        return PowerSeries(self._c + other._c, FLOAT)

    def __sub__(self, other):
        self._check(other)
        if self.mode == EXACT:
            return PowerSeries([a - b for a, b in zip(self._c, other._c)], EXACT)
        return PowerSeries(self._c - other._c, FLOAT)

    def __neg__(self):
        if self.mode == EXACT:
            return PowerSeries([-a for a in self._c], EXACT)
        return PowerSeries(-self._c, FLOAT)

    def scale(self, c) -> "PowerSeries":
        if self.mode == EXACT:
            c = _exact(c)
            return PowerSeries([c * a for a in self._c], EXACT)
        return PowerSeries(complex(c) * self._c if isinstance(c, (complex, GaussianRational)) else float(c) * self._c, FLOAT)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_mul(self, other)
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        if self.mode != other.mode or self.order != other.order:
            return False
        if self.mode == EXACT:
            return self._c == other._c
        return bool(np.array_equal(self._c, other._c))

    __hash__ = None

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise IndexError(f"cannot extend order {self.order} to {order}")
        return PowerSeries(self._c[: order + 1], self.mode)

    def zderiv(self) -> "PowerSeries":
        """``z * a'(z)``, i.e. coefficients ``k * a_k``."""
        if self.mode == EXACT:
            return PowerSeries([k * a for k, a in enumerate(self._c)], EXACT)
        return PowerSeries(np.arange(len(self._c)) * self._c, FLOAT)

    def partial_sums(self) -> "PowerSeries":
        """Coefficients of ``a(z) / (1 - z)``."""
        if self.mode == EXACT:
            out, s = [], Fraction(0)
            for a in self._c:
                s = s + a
                out.append(s)
            return PowerSeries(out, EXACT)
        return PowerSeries(np.cumsum(self._c), FLOAT)

    def evaluate(self, x):
        """``sum_k a_k x**k`` over the retained coefficients (float/complex result)."""
        c = self._c if self.mode == FLOAT else np.array([complex(v) if isinstance(v, GaussianRational) else float(v) for v in self._c])
        powers = np.power(complex(x) if isinstance(x, complex) else float(x), np.arange(len(c)))
        terms = c * powers
        return fsum_complex(terms) if len(terms) >= FSUM_THRESHOLD else terms.sum()

    def __repr__(self):
        head = ", ".join(str(x) for x in list(self._c[:8]))
        more = ", ..." if len(self) > 8 else ""
        return f"PowerSeries([{head}{more}], order={self.order}, mode={self.mode!r})"


def _as_float_arrays(a: PowerSeries, b: PowerSeries):
    x, y = np.asarray(a.coeffs), np.asarray(b.coeffs)
    if np.iscomplexobj(x) or np.iscomplexobj(y):
        x, y = x.astype(np.complex128), y.astype(np.complex128)
    return x, y


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the common order."""
    a._check(b)
    N = a.order
    if a.mode == EXACT:
        na, nb = a.nonzero_indices(), b.nonzero_indices()
        if len(na) > len(nb):
            a, b, na, nb = b, a, nb, na
        c = [Fraction(0)] * (N + 1)
        bc = b.coeffs
        for i in na:
            ai = a.coeffs[i]
            for j in nb:
                if i + j > N:
                    break
                c[i + j] = c[i + j] + ai * bc[j]
        return PowerSeries(c, EXACT)
    x, y = _as_float_arrays(a, b)
    nx, ny = np.flatnonzero(x), np.flatnonzero(y)
    if len(nx) > len(ny):
        x, y, nx, ny = y, x, ny, nx
    if len(nx) < FSUM_THRESHOLD:
        # every output coefficient has fewer than FSUM_THRESHOLD terms
        c = np.zeros(N + 1, dtype=np.result_type(x, y))
        for i in nx:
            c[i:] += x[i] * y[: N + 1 - i]
        return PowerSeries(c, FLOAT)
    c = np.empty(N + 1, dtype=np.result_type(x, y))
    for n in range(N + 1):
        c[n] = _dot(x[: n + 1], y[n::-1])
    return PowerSeries(c, FLOAT)


def series_exp(L: PowerSeries) -> PowerSeries:
    """``exp(L(z))`` for ``L(0) = 0`` via ``n F_n = sum_k k L_k F_{n-k}``."""
    if L[0] != 0:
        raise DomainError("series_exp requires L_0 = 0")
    N = L.order
    if L.mode == EXACT:
        kl = [(k, k * L.coeffs[k]) for k in range(1, N + 1) if L.coeffs[k] != 0]
        F = [Fraction(1)]
        for n in range(1, N + 1):
            s = Fraction(0)
            for k, v in kl:
                if k > n:
                    break
                s = s + v * F[n - k]
            F.append(s / n)
        return PowerSeries(F, EXACT)
    kl = np.arange(N + 1) * np.asarray(L.coeffs)
    F = np.zeros(N + 1, dtype=kl.dtype)
    F[0] = 1.0
    nz = np.flatnonzero(kl)
    sparse = len(nz) < FSUM_THRESHOLD
    for n in range(1, N + 1):
        if sparse:
            ks = nz[: np.searchsorted(nz, n, side="right")]
            F[n] = np.dot(kl[ks], F[n - ks]) / n
        else:
            F[n] = _dot(kl[1 : n + 1], F[n - 1 :: -1]) / n
    return PowerSeries(F, FLOAT)


def series_log(F: PowerSeries) -> PowerSeries:
    """Inverse of :func:`series_exp`: ``L`` with ``exp(L) = F``; needs ``F_0 = 1``."""
    if F[0] != 1:
        raise DomainError("series_log requires F_0 = 1")
    N = F.order
    if F.mode == EXACT:
        c = F.coeffs
        kL = [Fraction(0)] * (N + 1)  # k * L_k
        for n in range(1, N + 1):
            s = n * c[n]
            for k in range(1, n):
                if kL[k] != 0 and c[n - k] != 0:
                    s = s - kL[k] * c[n - k]
            kL[n] = s
        return PowerSeries([Fraction(0)] + [kL[n] / n for n in range(1, N + 1)], EXACT)
    c = np.asarray(F.coeffs)
    kL = np.zeros(N + 1, dtype=c.dtype)
    for n in range(1, N + 1):
        kL[n] = n * c[n] - _dot(kL[1:n], c[n - 1 : 0 : -1])
    out = np.zeros(N + 1, dtype=c.dtype)
    out[1:] = kL[1:] / np.arange(1, N + 1)
    return PowerSeries(out, FLOAT)


def series_inv(a: PowerSeries) -> PowerSeries:
    """Reciprocal series ``1 / a(z)``; needs ``a_0 != 0``."""
    if a[0] == 0:
        raise DomainError("series_inv requires a_0 != 0")
    N = a.order
    if a.mode == EXACT:
        c = a.coeffs
        nz = [k for k in range(1, N + 1) if c[k] != 0]
        inv0 = 1 / c[0] if not isinstance(c[0], GaussianRational) else GaussianRational(1) / c[0]
        b = [inv0]
        for n in range(1, N + 1):
            s = Fraction(0)
            for k in nz:
                if k > n:
                    break
                s = s + c[k] * b[n - k]
            b.append(-s * inv0)
        return PowerSeries(b, EXACT)
    c = np.asarray(a.coeffs)
    b = np.zeros(N + 1, dtype=c.dtype)
    b[0] = 1.0 / c[0]
    for n in range(1, N + 1):
        b[n] = -_dot(c[1 : n + 1], b[n - 1 :: -1]) * b[0]
    return PowerSeries(b, FLOAT)


def series_binom(k: int, v, order: int, mode: str = EXACT) -> PowerSeries:
    """Coefficients of ``(1 - z**k)**v`` up to ``z**order``.

    The coefficient at ``z**(k*m)`` is ``binomial(v, m) * (-1)**m``; all other
    coefficients vanish.
    """
    if k < 1:
        raise DomainError(f"series_binom needs k >= 1, got {k}")
    if mode == EXACT:
        v = Fraction(v)
        c = [Fraction(0)] * (order + 1)
        term = Fraction(1)
    else:
        v = float(v)
        c = np.zeros(order + 1)
        term = 1.0
    m = 0
    while k * m <= order:
        c[k * m] = term
        m += 1
        term = term * (m - 1 - v) / m
    return PowerSeries(c, mode)


def exact_or_float(values: Sequence) -> str:
    """``exact`` when every value is an exact scalar, else ``float``."""
    return EXACT if all(is_exact_scalar(x) for x in values) else FLOAT
