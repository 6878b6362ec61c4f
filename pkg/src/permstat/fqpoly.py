"""Random monic polynomials of degree n over F_q (q prime).

``xi_k(P)`` counts the irreducible factors of degree k (with multiplicity),
so ``(xi_1, ..., xi_n)`` plays the role of the cycle type.  The uniform
measure on the q**n monics has the generating identity

    prod_m (1 - (z/q)**m)**(-I_m) = 1 / (1 - z),

with I_m the number of monic irreducibles of degree m.  Writing
``A_m = (m I_m - q**m) / q**(m/2)`` (always in [-2, 0]) isolates the
deviation from the permutation case.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import divisors, mobius
from .errors import DomainError
from .partitions import Atom, CycleType, Stat, _sorted_atoms, make_stat
from .series import EXACT, FLOAT, PowerSeries, series_binom, series_exp, series_mul

BRUTE_LIMIT = 10**7
SERIES_LIMIT = 2000


def _check_prime(q: int):
    if q < 2 or any(q % p == 0 for p in range(2, math.isqrt(q) + 1)):
        raise DomainError(f"q must be prime, got {q}")


@lru_cache(maxsize=None)
def count_irreducible(q: int, n: int) -> int:
    """``I_n = (1/n) sum_{d|n} mu(d) q**(n/d)``."""
    if q < 2 or n < 1:
        raise DomainError(f"count_irreducible needs q >= 2, n >= 1, got q={q}, n={n}")
    return sum(mobius(d) * q ** (n // d) for d in divisors(n)) // n


def A_coeff(q: int, n: int) -> float:
    """``A_n = (n I_n - q**n) / q**(n/2)``."""
    return (n * count_irreducible(q, n) - q**n) / q ** (n / 2)


def product_identity_series(q: int, N: int) -> PowerSeries:
    """``prod_{m<=N} (1 - (z/q)**m)**(-I_m)`` exactly (should be all ones)."""
    L = [Fraction(0)] * (N + 1)
    for m in range(1, N + 1):
        Im = count_irreducible(q, m)
        r = 1
        while m * r <= N:
            L[m * r] += Fraction(Im, r * q ** (m * r))
            r += 1
    return series_exp(PowerSeries(L, EXACT))


def mean_xi(q: int, n: int, k: int) -> Fraction:
    """``E xi_k = (I_k / q**k) sum_{1 <= j, kj <= n} q**(-k (j-1))``."""
    if k < 1 or n < 0:
        raise DomainError(f"mean_xi needs k >= 1, got {k}")
    if k > n:
        return Fraction(0)
    s = sum(Fraction(1, q ** (k * (j - 1))) for j in range(1, n // k + 1))
    return Fraction(count_irreducible(q, k), q**k) * s


def Fk_series(q: int, k: int, N: int) -> PowerSeries:
    """``F_k(z) = sum_{k|m} I_m [log(1 - (z/q)**m) + (z/q)**m] - sum_{k|m} A_m z**m / (m q**(m/2))``.

    Built in float mode.  The r = 1 term of the logarithm cancels the
    ``(z/q)**m`` term, leaving ``-A_m / (m q**(m/2)) = (q**m - m I_m) / (m q**m)``
    at z**m, which is formed from exact integers to avoid cancellation.
    """
    if k < 2:
        raise DomainError(f"Fk_series needs k >= 2, got {k}")
    if N > SERIES_LIMIT:
        raise DomainError(f"N = {N} exceeds {SERIES_LIMIT}")
    c = np.zeros(N + 1)
    for m in range(k, N + 1, k):
        Im = count_irreducible(q, m)
        ratio = float(Fraction(Im, q**m))  # I_m / q^m, about 1/m
        c[m] += float(Fraction(q**m - m * Im, m * q**m))
        r = 2
        while m * r <= N:
            t = ratio * float(q) ** (-m * (r - 1)) / r
            if t == 0.0:
                break
            c[m * r] -= t
            r += 1
    return PowerSeries(c, FLOAT)


def prob_Dnk_zero_fq(q: int, n: int, k: int) -> float:
    """``P(D_{n,k} = 0) = [(1 - z**k)**(1/k) / (1 - z) exp F_k(z)]_n``."""
    _check_prime(q)
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    if n > SERIES_LIMIT:
        raise DomainError(f"n = {n} exceeds {SERIES_LIMIT}")
    if k > n:
        return 1.0
    s = series_mul(series_binom(k, Fraction(1, k), n, FLOAT).partial_sums(), series_exp(Fk_series(q, k, n)))
    return float(min(max(s[n], 0.0), 1.0))


def char_fn_fq(q: int, n: int, a, t: float) -> complex:
    """``E exp(i t sum_k a_k xi_k)`` as ``[prod_k (1 - (z/q)**k e^{i t a_k})**(-I_k)]_n``.

    ``a[k - 1]`` is the coefficient of xi_k.
    """
    if n > SERIES_LIMIT:
        raise DomainError(f"n = {n} exceeds {SERIES_LIMIT}")
    a = np.asarray(a, dtype=float)
    if len(a) < n:
        raise DomainError(f"coefficient table has {len(a)} entries, need {n}")
    L = np.zeros(n + 1, dtype=np.complex128)
    for m in range(1, n + 1):
        ratio = float(Fraction(count_irreducible(q, m), q**m))
        w = cmath.exp(1j * t * a[m - 1])
        r = 1
        while m * r <= n:
            mag = ratio * float(q) ** (-m * (r - 1)) / r
            if mag == 0.0:
                break
            L[m * r] += mag * w**r
            r += 1
    return complex(series_exp(PowerSeries(L, FLOAT))[n])


# -- brute force ---------------------------------------------------------------
#
# A monic polynomial of degree d with coefficients c_0..c_{d-1} is encoded as
# the integer c_0 + c_1 q + ... + c_{d-1} q^{d-1} + q^d.


def _decode(e: int, q: int) -> list[int]:
    c = []
    while e:
        e, r = divmod(e, q)
        c.append(r)
    return c


def _encode(c: list[int], q: int) -> int:
    e = 0
    for x in reversed(c):
        e = e * q + x
    return e


def _mul(a: list[int], b: list[int], q: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return out


def irreducibles(q: int, n: int) -> dict[int, list[int]]:
    """Encodings of monic irreducibles of each degree 1..n, by a product sieve."""
    _check_prime(q)
    irr: dict[int, list[int]] = {}
    for d in range(1, n + 1):
        reducible = set()
        for e in range(1, d // 2 + 1):
            for A in irr[e]:
                a = _decode(A, q)
                for B in range(q ** (d - e), 2 * q ** (d - e)):
                    reducible.add(_encode(_mul(a, _decode(B, q), q), q))
        irr[d] = [P for P in range(q**d, 2 * q**d) if P not in reducible]
    return irr


@dataclass(frozen=True)
class FqBrute:
    q: int
    n: int
    types: Counter  # xi vector (tuple) -> number of monics with that factorization pattern
    irreducible_counts: tuple

    @property
    def total(self) -> int:
        return sum(self.types.values())

    def distribution(self, stat: Stat | str) -> list[Atom]:
        if isinstance(stat, str):
            stat = _fq_stat(stat)
        acc: Counter = Counter()
        for xi, c in self.types.items():
            acc[stat.key(CycleType(xi))] += c
        return _sorted_atoms({k: Fraction(v, self.total) for k, v in acc.items()}, stat)

    def mean(self, stat: Stat | str) -> Fraction:
        return sum((Fraction(a.value) * a.prob for a in self.distribution(stat)), Fraction(0))


def _fq_stat(name: str) -> Stat:
    if name.startswith("xi:"):
        k = int(name[3:])
        return Stat(name, lambda t: t.count(k), lambda v: v)
    if name.startswith("Dzero:"):
        k = int(name[6:])
        if k < 2:
            raise DomainError("Dzero:k needs k >= 2")
        return Stat(name, lambda t: int(make_stat(f"D:{k}").key(t) == 0), lambda v: v)
    return make_stat(name)


def brute_stats(q: int, n: int) -> FqBrute:
    """Factor every monic of degree n (enumerating products of sieved irreducibles).

    Each monic arises from exactly one multiset of irreducibles; the product
    encodings are collected and checked to cover all q**n monics once.
    """
    _check_prime(q)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if q**n > BRUTE_LIMIT:
        raise DomainError(f"q**n = {q**n} exceeds the enumeration guard {BRUTE_LIMIT}")
    irr = irreducibles(q, n)
    flat = [(d, _decode(P, q)) for d in range(1, n + 1) for P in irr[d]]
    seen: set[int] = set()
    types: Counter = Counter()
    xi = [0] * n

    def rec(start: int, rest: int, poly: list[int]):
        if rest == 0:
            e = _encode(poly, q)
            if e in seen:
                raise AssertionError("a monic polynomial was produced twice")
            seen.add(e)
            types[tuple(xi)] += 1
            return
        for i in range(start, len(flat)):
            d, f = flat[i]
            if d > rest:
                break
            xi[d - 1] += 1
            rec(i, rest - d, _mul(poly, f, q))
            xi[d - 1] -= 1

    rec(0, n, [1])
    if len(seen) != q**n:
        raise AssertionError(f"enumerated {len(seen)} monics, expected {q**n}")
    return FqBrute(q=q, n=n, types=types, irreducible_counts=tuple(len(irr[d]) for d in range(1, n + 1)))
