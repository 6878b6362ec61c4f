"""Cycle-length weights ``d_j`` defining the measure nu_{n,d} on S_n.

A permutation with cycle type ``alpha`` gets weight ``prod_j d_j**alpha_j``.
The normalizer is ``n! * p_n`` where ``p(z) = exp(sum_j d_j z**j / j)``, and
``p_n`` obeys ``n p_n = sum_{k<=n} d_k p_{n-k}``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError
from .series import EXACT, FLOAT, PowerSeries, series_exp

# p_n is kept as exact rationals up to this order, floats beyond.
EXACT_ORDER_LIMIT = 2000

KINDS = ("uniform", "ewens", "coprime", "table")


@dataclass(frozen=True)
class WeightSystem:
    """Weights ``d_1..d_{n_max}`` with the derived sequence ``p_0..p_{n_max}``.

    ``d[0]`` is an unused placeholder so that ``d[j]`` is the weight of a
    j-cycle.  ``p`` is a tuple of Fractions when ``exact`` and a float array
    otherwise.
    """

    kind: str
    n_max: int
    d: tuple
    p: object = field(repr=False)
    exact: bool = True
    theta: Fraction | None = None
    k: int | None = None

    @property
    def d_minus(self):
        return min(self.d[1:]) if self.n_max else None

    @property
    def d_plus(self):
        return max(self.d[1:]) if self.n_max else None

    @property
    def positive(self) -> bool:
        """True when every weight is strictly positive (d^- > 0)."""
        return self.n_max == 0 or self.d_minus > 0

    @property
    def mode(self) -> str:
        return EXACT if self.exact else FLOAT

    def pn(self, n: int):
        if n < 0 or n > self.n_max:
            raise IndexError(f"p_{n} outside 0..{self.n_max}")
        return self.p[n]

    def p_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.p]) if self.exact else np.asarray(self.p)

    def d_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.d])

    def label(self) -> str:
        if self.kind == "ewens":
            return f"ewens:{self.theta}"
        if self.kind == "coprime":
            return f"coprime:{self.k}"
        return self.kind


def _p_recurrence(d: Sequence, n_max: int, exact: bool):
    if exact:
        nz = [(k, d[k]) for k in range(1, n_max + 1) if d[k] != 0]
        p = [Fraction(1)]
        for n in range(1, n_max + 1):
            s = Fraction(0)
            for k, dk in nz:
                if k > n:
                    break
                s += dk * p[n - k]
            p.append(s / n)
        return tuple(p)
    df = np.array([float(x) for x in d])
    p = np.zeros(n_max + 1)
    p[0] = 1.0
    for n in range(1, n_max + 1):
        terms = df[1 : n + 1] * p[n - 1 :: -1]
        p[n] = (math.fsum(terms) if n >= 1000 else terms.sum()) / n
    p.flags.writeable = False
    return p


def _p_closed_form(theta: Fraction, n_max: int, exact: bool):
    # constant d_j = theta: p_n = binomial(n + theta - 1, n) = p_{n-1} (theta + n - 1) / n
    if exact:
        p = [Fraction(1)]
        for n in range(1, n_max + 1):
            p.append(p[-1] * (theta + n - 1) / n)
        return tuple(p)
    n = np.arange(1, n_max + 1, dtype=float)
    p = np.concatenate([[1.0], np.cumprod((float(theta) + n - 1) / n)])
    p.flags.writeable = False
    return p


def make_weights(kind: str, n_max: int, *, theta=None, k: int | None = None,
                 table: dict[int, object] | Sequence | None = None,
                 exact: bool | None = None) -> WeightSystem:
    """Build a weight system.

    ``kind`` is one of ``uniform``, ``ewens`` (needs ``theta > 0``),
    ``coprime`` (``d_j = 1`` iff ``gcd(j, k) = 1``; needs ``k >= 1``) or
    ``table`` (``table`` maps j to ``d_j``, missing j are 0).  ``theta`` and
    table values may be ints, Fractions or decimal strings.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    if exact is None:
        exact = n_max <= EXACT_ORDER_LIMIT
    th = None
    if kind == "uniform":
        d = [Fraction(1)] * n_max
    elif kind == "ewens":
        if theta is None:
            raise DomainError("ewens weights need theta")
        th = Fraction(theta)
        if th <= 0:
            raise DomainError(f"ewens theta must be > 0, got {theta}")
        d = [th] * n_max
    elif kind == "coprime":
        if k is None or int(k) < 1:
            raise DomainError(f"coprime weights need k >= 1, got {k}")
        k = int(k)
        d = [Fraction(1) if math.gcd(j, k) == 1 else Fraction(0) for j in range(1, n_max + 1)]
    elif kind == "table":
        if table is None:
            raise DomainError("table weights need a table")
        items = table.items() if isinstance(table, dict) else enumerate(table, start=1)
        tab = {int(j): Fraction(v) for j, v in items}
        if any(v < 0 for v in tab.values()):
            raise DomainError("table weights must be nonnegative")
        if not any(v > 0 for v in tab.values()):
            raise DomainError("table weights must not all be zero")
        d = [tab.get(j, Fraction(0)) for j in range(1, n_max + 1)]
    else:
        raise DomainError(f"unknown weight kind {kind!r}; expected one of {KINDS}")
    d = (Fraction(0), *d)
    if kind in ("uniform", "ewens"):
        p = _p_closed_form(Fraction(1) if th is None else th, n_max, exact)
    else:
        p = _p_recurrence(d, n_max, exact)
    return WeightSystem(kind=kind, n_max=n_max, d=d, p=p, exact=exact, theta=th,
                        k=k if kind == "coprime" else None)


def parse_weight_spec(spec: str, n_max: int, exact: bool | None = None) -> WeightSystem:
    """Parse ``uniform | ewens:<rational> | coprime:<int> | table:<path>``."""
    name, _, arg = spec.partition(":")
    if name == "uniform" and not arg:
        return make_weights("uniform", n_max, exact=exact)
    if name == "ewens" and arg:
        try:
            theta = Fraction(arg)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"bad ewens parameter {arg!r}") from exc
        return make_weights("ewens", n_max, theta=theta, exact=exact)
    if name == "coprime" and arg:
        try:
            kk = int(arg)
        except ValueError as exc:
            raise DomainError(f"bad coprime parameter {arg!r}") from exc
        return make_weights("coprime", n_max, k=kk, exact=exact)
    if name == "table" and arg:
        return make_weights("table", n_max, table=load_weight_table(arg), exact=exact)
    raise DomainError(f"bad weight spec {spec!r}; expected uniform | ewens:<q> | coprime:<k> | table:<path>")


def load_weight_table(path: str | Path) -> dict[int, Fraction]:
    """Read a ``j,d_j`` CSV (header optional); values are parsed exactly."""
    out: dict[int, Fraction] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                j = int(row[0])
            except ValueError:
                if not out:
                    continue  # header line
                raise DomainError(f"bad weight-table row {row!r}")
            if j < 1:
                raise DomainError(f"weight-table index must be >= 1, got {j}")
            out[j] = Fraction(row[1].strip())
    return out


def p_series(W: WeightSystem, order: int | None = None) -> PowerSeries:
    """``p(z) = exp(sum_j d_j z**j / j)`` truncated at ``order`` (default n_max)."""
    N = W.n_max if order is None else order
    if N > W.n_max:
        raise DomainError(f"order {N} exceeds n_max {W.n_max}")
    if W.exact:
        L = PowerSeries([Fraction(0)] + [W.d[j] / j for j in range(1, N + 1)], EXACT)
    else:
        L = PowerSeries(np.concatenate([[0.0], W.d_float()[1 : N + 1] / np.arange(1, N + 1)]), FLOAT)
    return series_exp(L)


def first_cycle_dist(W: WeightSystem, n: int) -> list:
    """Law of the length of the cycle through a marked point: ``d_j p_{n-j} / (n p_n)``."""
    if n < 1 or n > W.n_max:
        raise DomainError(f"n must lie in 1..{W.n_max}, got {n}")
    pn = W.p[n]
    if pn == 0:
        raise DomainError(f"p_{n} = 0 for these weights; nu_{{n,d}} is undefined")
    return [W.d[j] * W.p[n - j] / (n * pn) for j in range(1, n + 1)]


def p_at(W: WeightSystem, x: float) -> float:
    """``p(x) = exp(sum_j d_j x**j / j)`` for ``0 <= x < 1``, summed over all j.

    Closed forms are used for the infinite families; table weights vanish
    beyond the table, so their sum is finite.
    """
    if not 0 <= x < 1:
        raise DomainError(f"p(x) needs 0 <= x < 1, got {x}")
    if W.kind == "uniform":
        return 1.0 / (1.0 - x)
    if W.kind == "ewens":
        return (1.0 - x) ** (-float(W.theta))
    if W.kind == "coprime":
        from .arith import divisors, mobius

        return math.exp(-math.fsum(mobius(m) / m * math.log1p(-(x**m)) for m in divisors(W.k)))
    j = np.arange(1, W.n_max + 1)
    return math.exp(math.fsum(W.d_float()[1:] * x**j / j))
