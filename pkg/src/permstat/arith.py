"""Small exact number-theory helpers (Moebius, Euler phi, sieves)."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n >= 1`` as ``((p, e), ...)`` with p ascending."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    r = n
    for p, _ in factorize(n):
        r = r // p * (p - 1)
    return r


def radical(n: int) -> int:
    return math.prod(prime_divisors(n)) if n > 1 else 1


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def prime_sieve(n: int) -> np.ndarray:
    """All primes ``<= n`` (deterministic Eratosthenes sieve)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def smallest_prime_factor(n: int) -> np.ndarray:
    """``spf[j]`` = least prime dividing j, for ``0 <= j <= n`` (spf[0]=spf[1]=0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            tail = spf[p * p :: p]
            tail[tail == 0] = p
    idx = np.arange(n + 1, dtype=np.int64)
    unset = (spf == 0) & (idx >= 2)
    spf[unset] = idx[unset]
    return spf


def prime_powers(n: int) -> list[tuple[int, int]]:
    """Pairs ``(p, p**s)`` for every prime power ``p**s <= n``, ordered by p then s."""
    out = []
    for p in prime_sieve(n).tolist():
        m = p
        while m <= n:
            out.append((p, m))
            m *= p
    return out
