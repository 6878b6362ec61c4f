"""Exact distributions of cycle-type statistics.

Every statistic handled here is a function of the cycle type
``alpha = (alpha_1, ..., alpha_n)`` with ``sum_j j * alpha_j = n``.  Under
nu_{n,d} a type has probability ``prod_j (d_j / j)**alpha_j / alpha_j! / p_n``,
so the exact law of a statistic follows by enumerating integer partitions.

:func:`brute_force` is the independent check: it walks all ``n!``
permutations, decomposes each into cycles and weights it by ``d(sigma)``.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterator, NamedTuple

from .arith import factorize
from .errors import DomainError
from .weights import WeightSystem

MAX_ENUM_N = 90
MAX_BRUTE_N = 8


@dataclass(frozen=True)
class CycleType:
    """Cycle multiplicities; ``alpha[j - 1]`` counts the j-cycles."""

    alpha: tuple[int, ...]

    def __post_init__(self):
        if any(a < 0 for a in self.alpha):
            raise ValueError(f"negative multiplicity in {self.alpha}")

    @classmethod
    def from_lengths(cls, lengths, n: int | None = None) -> "CycleType":
        n = sum(lengths) if n is None else n
        a = [0] * n
        for j in lengths:
            a[j - 1] += 1
        return cls(tuple(a))

    @property
    def n(self) -> int:
        return sum((j + 1) * a for j, a in enumerate(self.alpha))

    def count(self, j: int) -> int:
        return self.alpha[j - 1] if 1 <= j <= len(self.alpha) else 0

    def lengths(self) -> Iterator[int]:
        """Distinct cycle lengths present, ascending."""
        return (j + 1 for j, a in enumerate(self.alpha) if a)

    @property
    def omega(self) -> int:
        return sum(self.alpha)

    def class_size(self) -> int:
        """Number of permutations in S_n with this cycle type."""
        den = 1
        for j, a in enumerate(self.alpha, start=1):
            den *= j**a * math.factorial(a)
        return math.factorial(self.n) // den


class StatValue(NamedTuple):
    omega: int
    P: int
    O: int
    order_factorization: dict
    logP: float
    logO: float


def order_factorization(t: CycleType) -> dict[int, int]:
    """prime -> max exponent over the cycle lengths present (the lcm, factored)."""
    out: dict[int, int] = {}
    for j in t.lengths():
        for p, e in factorize(j):
            if e > out.get(p, 0):
                out[p] = e
    return out


def dnk(t: CycleType, k: int) -> int:
    """Number of cycles whose length is divisible by k."""
    return sum(t.alpha[j - 1] for j in range(k, len(t.alpha) + 1, k))


def stat_of(t: CycleType) -> StatValue:
    fac = order_factorization(t)
    P = math.prod(j**a for j, a in enumerate(t.alpha, start=1) if a)
    O = math.prod(p**e for p, e in fac.items())
    logP = math.fsum(a * math.log(j) for j, a in enumerate(t.alpha, start=1) if a and j > 1)
    logO = math.fsum(e * math.log(p) for p, e in fac.items())
    return StatValue(t.omega, P, O, fac, logP, logO)


# -- statistics as (key, value) pairs ----------------------------------------


class Stat(NamedTuple):
    """A cycle-type functional.

    ``key`` maps a type to an exact hashable key; ``value`` maps a key to the
    real value reported.  Keys keep real-valued statistics free of float
    aliasing (``logP`` is keyed by the integer P, and so on).
    """

    name: str
    key: Callable[[CycleType], Hashable]
    value: Callable[[Hashable], object]


def _float_key(x: float) -> float:
    return round(x, 12)


def make_stat(name: str, hhat=None) -> Stat:
    """Statistic by name: ``omega``, ``logP``, ``logO``, ``logP-logO``,
    ``D:<k>``, ``type`` or ``additive`` (with ``hhat`` = values on lengths 1..n)."""
    if name == "omega":
        return Stat(name, lambda t: t.omega, lambda v: v)
    if name == "logP":
        return Stat(name, lambda t: stat_of(t).P, lambda P: math.log(P))
    if name == "logO":
        return Stat(name, lambda t: math.prod(p**e for p, e in order_factorization(t).items()),
                    lambda O: math.log(O))
    if name == "logP-logO":
        def key(t):
            s = stat_of(t)
            return s.P // s.O
        return Stat(name, key, lambda r: math.log(r))
    if name.startswith("D:"):
        k = int(name[2:])
        if k < 1:
            raise DomainError(f"D:k needs k >= 1, got {k}")
        return Stat(name, lambda t: dnk(t, k), lambda v: v)
    if name == "type":
        return Stat(name, lambda t: t.alpha, lambda v: v)
    if name == "additive":
        if hhat is None:
            raise DomainError("additive statistic needs an hhat table")
        h = list(hhat)
        exact = all(isinstance(x, (int, Fraction)) for x in h)

        def akey(t):
            if len(t.alpha) > len(h):
                raise DomainError(f"hhat table has {len(h)} entries, need {len(t.alpha)}")
            if exact:
                return sum((Fraction(h[j]) * a for j, a in enumerate(t.alpha) if a), Fraction(0))
            return _float_key(math.fsum(h[j] * a for j, a in enumerate(t.alpha) if a))

        return Stat(name, akey, lambda v: v)
    raise DomainError(f"unknown statistic {name!r}")


class Atom(NamedTuple):
    value: object
    prob: object
    key: Hashable


# -- enumeration ------------------------------------------------------------


def _partitions_max_part(n: int, largest: int) -> Iterator[list[int]]:
    """Partitions of n (nonincreasing parts) whose largest part is <= largest."""
    if n == 0:
        yield []
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_max_part(n - first, first):
            yield [first] + rest


def cycle_types(n: int) -> Iterator[CycleType]:
    """All cycle types of n, grouped by largest part (ascending); deterministic."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n > MAX_ENUM_N:
        raise DomainError(f"n = {n} exceeds the enumeration guard {MAX_ENUM_N}")
    if n == 0:
        yield CycleType(())
        return
    for largest in range(1, n + 1):
        for rest in _partitions_max_part(n - largest, largest):
            yield CycleType.from_lengths([largest] + rest, n)


def iterate_cycle_types(n: int, visitor: Callable[[CycleType], None]) -> None:
    for t in cycle_types(n):
        visitor(t)


def type_probability(W: WeightSystem, t: CycleType):
    n = t.n
    if n > W.n_max:
        raise DomainError(f"type of size {n} exceeds weight n_max {W.n_max}")
    pn = W.p[n]
    if pn == 0:
        raise DomainError(f"p_{n} = 0 for these weights")
    w = Fraction(1)
    for j, a in enumerate(t.alpha, start=1):
        if a:
            w *= (W.d[j] / j) ** a / math.factorial(a)
    return w / pn if W.exact else float(w) / pn


def _sorted_atoms(acc: dict, stat: Stat) -> list[Atom]:
    atoms = [Atom(stat.value(k), pr, k) for k, pr in acc.items() if pr != 0]
    atoms.sort(key=lambda a: (a.value, a.key) if not isinstance(a.key, tuple) else (0, a.key))
    return atoms


def exact_distribution(W: WeightSystem, n: int, stat: Stat | str, snk_k: int | None = None) -> list[Atom]:
    """Exact law of ``stat`` under nu_{n,d}, or under uniform-on-S_n^(k) if ``snk_k``.

    Atoms with zero mass are dropped; values ascend.
    """
    from .snk import pavlov_filter

    if isinstance(stat, str):
        stat = make_stat(stat)
    acc: dict = defaultdict(Fraction)
    if snk_k is not None:
        if W.kind != "uniform":
            raise DomainError("S_n^(k) distributions are defined for uniform weights only")
        if snk_k < 1:
            raise DomainError(f"k must be >= 1, got {snk_k}")
        total = 0
        for t in cycle_types(n):
            if pavlov_filter(snk_k, t):
                c = t.class_size()
                total += c
                acc[stat.key(t)] += c
        return _sorted_atoms({key: Fraction(v, total) for key, v in acc.items()}, stat)
    if not W.exact:
        acc = defaultdict(float)
    for t in cycle_types(n):
        acc[stat.key(t)] += type_probability(W, t)
    return _sorted_atoms(dict(acc), stat)


def expectation(atoms: list[Atom]):
    """Mean of a distribution returned by :func:`exact_distribution` (float)."""
    return math.fsum(float(a.value) * float(a.prob) for a in atoms)


# -- brute-force oracle ------------------------------------------------------


def permutation_cycle_type(perm: tuple[int, ...]) -> CycleType:
    n = len(perm)
    seen = [False] * n
    lengths = []
    for s in range(n):
        if not seen[s]:
            L, x = 0, s
            while not seen[x]:
                seen[x] = True
                x = perm[x]
                L += 1
            lengths.append(L)
    return CycleType.from_lengths(lengths, n)


def brute_force(n: int, stat: Stat | str, W: WeightSystem | None = None,
                perms=None) -> list[Atom]:
    """Law of ``stat`` by walking every permutation of S_n (n <= 8).

    ``W`` defaults to uniform weights.  ``perms`` optionally restricts the
    walk to a given collection of permutations, each weighted by ``d(sigma)``.
    """
    if n > MAX_BRUTE_N:
        raise DomainError(f"brute force is limited to n <= {MAX_BRUTE_N}")
    if isinstance(stat, str):
        stat = make_stat(stat)
    acc: dict = defaultdict(Fraction)
    total = Fraction(0)
    for perm in (itertools.permutations(range(n)) if perms is None else perms):
        t = permutation_cycle_type(perm)
        w = Fraction(1)
        if W is not None:
            for j in t.lengths():
                w *= W.d[j] ** t.count(j)
        if w:
            acc[stat.key(t)] += w
            total += w
    if total == 0:
        raise DomainError("all permutations have zero weight")
    return _sorted_atoms({key: v / total for key, v in acc.items()}, stat)
