"""Mean values of multiplicative functions under nu_{n,d}.

For ``f(sigma) = prod_cycles fhat(|kappa|)`` the generating identity

    sum_n p_n M_n^d(f) z**n = exp(sum_j d_j fhat(j) z**j / j)

gives the exact mean as a single series coefficient.  The error functionals
below return both sides of the relevant inequalities; the absolute constants
involved are unknown and so are never hardcoded, only the measured ratios
are reported.

Tables are 0-based: ``fhat[j - 1]`` is the value on j-cycles.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError
from .series import (EXACT, FLOAT, GaussianRational, PowerSeries, _exact, exact_or_float,
                     fsum_complex, series_exp)
from .weights import WeightSystem, p_at


def load_fhat_table(path: str | Path, n: int | None = None) -> list[complex]:
    """Read ``j,re,im`` rows; missing j default to 1 (the neutral value)."""
    vals: dict[int, complex] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                j = int(row[0])
            except ValueError:
                if not vals:
                    continue
                raise DomainError(f"bad fhat row {row!r}")
            im = float(row[2]) if len(row) > 2 and row[2].strip() else 0.0
            vals[j] = complex(float(row[1]), im)
    if not vals:
        raise DomainError(f"no rows in fhat table {path}")
    N = max(vals) if n is None else n
    return [vals.get(j, 1.0 + 0j) for j in range(1, N + 1)]


def _check_n(W: WeightSystem, n: int):
    if n < 0 or n > W.n_max:
        raise DomainError(f"n = {n} outside 0..{W.n_max} for these weights")
    if W.p[n] == 0:
        raise DomainError(f"p_{n} = 0 for these weights; the measure is undefined")


def _table(fhat, n: int) -> list:
    f = list(fhat)
    if len(f) < n:
        raise DomainError(f"fhat table has {len(f)} entries, need {n}")
    return f[:n]


def _use_exact(W: WeightSystem, f) -> bool:
    return W.exact and exact_or_float(f) == EXACT


def mult_series(W: WeightSystem, fhat, n: int, exact: bool | None = None) -> PowerSeries:
    """``exp(sum_{j<=n} d_j fhat(j) z**j / j)`` truncated at z**n (coefficients M_0..M_n)."""
    f = _table(fhat, n)
    if exact is None:
        exact = _use_exact(W, f)
    if exact:
        L = [Fraction(0)] + [W.d[j] * _exact(f[j - 1]) / j for j in range(1, n + 1)]
        return series_exp(PowerSeries(L, EXACT))
    fc = np.array([complex(x) for x in f]) if f else np.zeros(0, complex)
    if not np.any(fc.imag):
        fc = fc.real
    L = np.zeros(n + 1, dtype=fc.dtype)
    L[1:] = W.d_float()[1 : n + 1] * fc / np.arange(1, n + 1)
    return series_exp(PowerSeries(L, FLOAT))


def mean_value(W: WeightSystem, fhat: Sequence, n: int, exact: bool | None = None):
    """``M_n^d(f) = M_n / p_n``; exact (Fraction or GaussianRational) when inputs allow."""
    _check_n(W, n)
    f = _table(fhat, n)
    if exact is None:
        exact = _use_exact(W, f)
    Mn = mult_series(W, f, n, exact=exact)[n]
    if exact:
        return Mn / W.p[n]
    return Mn / float(W.p[n])


@dataclass(frozen=True)
class MeanValueReport:
    exact_mean: complex
    main_term: complex
    corrected_term: complex
    delta: float
    delta_bound: float | None
    delta_ratio: float | None
    rho_p: float | None
    p: float
    E_u: float
    u: float
    theorem_ratio: float


def rho(fhat: Sequence, n: int, p: float) -> float:
    """``(sum_k |fhat(k)-1|**p / k)**(1/p)``; ``p = inf`` gives ``max |fhat(k)-1|``."""
    g = np.abs(np.array([complex(x) for x in _table(fhat, n)]) - 1.0)
    if math.isinf(p):
        return float(g.max()) if n else 0.0
    return math.fsum(g**p / np.arange(1, n + 1)) ** (1.0 / p)


def E_of_u(fhat: Sequence, n: int, u: float) -> float:
    g = np.abs(np.array([complex(x) for x in _table(fhat, n)]) - 1.0)
    k = np.arange(1, n + 1)
    big = g > u
    return math.exp(2 * math.fsum(g[big] / k[big]))


def delta_bracket(W: WeightSystem, fhat: Sequence, n: int) -> float:
    """Bracketed right-hand side of the Delta_n bound (without the constant)."""
    if not W.positive:
        raise DomainError("the Delta_n bound needs d^- > 0")
    g = np.abs(np.array([complex(x) for x in _table(fhat, n)]) - 1.0)
    k = np.arange(1, n + 1, dtype=float)
    p = W.p_float()
    first = math.fsum(g * p[n - 1 :: -1][:n]) / math.fsum(p[: n + 1])
    dm = float(W.d_minus)
    if dm < 1:
        return first + math.fsum(g * k ** (dm - 1)) / n**dm + math.fsum(g) / n
    return first + math.fsum(g * (1 + np.log(n / k))) / n


def mean_report(W: WeightSystem, fhat: Sequence, n: int, p: float = 2.0, u: float = 0.1) -> MeanValueReport:
    """Exact mean next to its exponential main term and first-order correction."""
    _check_n(W, n)
    f = _table(fhat, n)
    fc = np.array([complex(x) for x in f])
    if np.any(np.abs(fc) > 1 + 1e-12):
        raise DomainError("mean_report requires |fhat(j)| <= 1")
    exact_mean = complex(mean_value(W, f, n))
    k = np.arange(1, n + 1)
    d = W.d_float()[1 : n + 1]
    pf = W.p_float()
    w = d * (fc - 1) / k
    main = cmath.exp(fsum_complex(w))
    corr = main * (1 + fsum_complex(w * (pf[n - 1 :: -1][:n] / pf[n] - 1)))
    delta = abs(exact_mean - main)
    bound = ratio = rho_p = None
    if W.positive:
        bound = delta_bracket(W, f, n)
        ratio = delta / bound if bound > 0 else 0.0
        dm = float(W.d_minus)
        if not p > max(1.0, 1.0 / dm):
            raise DomainError(f"rho_p needs p > max(1, 1/d^-) = {max(1.0, 1.0 / dm)}, got {p}")
        rho_p = rho(f, n, p)
    Eu = E_of_u(f, n, u)
    dplus = float(W.d_plus)
    denom = abs(main) * Eu**dplus
    th = abs(exact_mean) / denom if denom > 0 else math.inf
    return MeanValueReport(exact_mean=exact_mean, main_term=main, corrected_term=corr, delta=delta,
                           delta_bound=bound, delta_ratio=ratio, rho_p=rho_p, p=p, E_u=Eu, u=u,
                           theorem_ratio=th)


# -- the weighted S(f; m) functional and the Tauberian check ------------------


def weighted_S(W: WeightSystem, a: PowerSeries, m: int):
    """``S(a; m) = sum_{k=1}^m a_k k p_{m-k}``."""
    if m > min(a.order, W.n_max) or m < 0:
        raise DomainError(f"m = {m} exceeds min(order {a.order}, n_max {W.n_max})")
    if a.mode == EXACT and W.exact:
        return sum((a[k] * k * W.p[m - k] for k in range(1, m + 1)), Fraction(0))
    c = np.asarray(a.to_float().coeffs)
    pf = W.p_float()
    return fsum_complex(c[1 : m + 1] * np.arange(1, m + 1) * pf[m - 1 :: -1][:m]) if m else 0.0


def S_sequence(W: WeightSystem, a: PowerSeries, order: int | None = None) -> np.ndarray:
    """``S(a; m)`` for m = 0..order as floats (convolution of z a'(z) with p)."""
    N = min(a.order, W.n_max) if order is None else order
    c = np.asarray(a.to_float().coeffs)[: N + 1] * np.arange(N + 1)
    pf = W.p_float()[: N + 1]
    return np.array([fsum_complex(c[1 : m + 1] * pf[m - 1 :: -1][:m]) if m else 0.0 for m in range(N + 1)])


@dataclass(frozen=True)
class FundamentalCheck:
    n: int
    lhs: float
    rhs: float
    ratio: float
    tail_order: int


def fundthm_check(W: WeightSystem, a: PowerSeries, n: int) -> FundamentalCheck:
    """Both sides of the Tauberian inequality relating p-weighted means to Abel means.

    LHS ``|sum a_k p_{n-k}/p_n - a(e^{-1/n}) - S(a;n)/(n p_n)|``; RHS the
    bracket ``n^-theta sum_{j<=n} |S(j)| j^{theta-1} / p(e^{-1/j})
    + sum_{j>n} |S(j)| e^{-j/n} / j / p(e^{-1/n})``.  The infinite parts
    (``a(e^{-1/n})`` and the j > n sum) are cut at ``min(a.order, W.n_max)``,
    reported as ``tail_order``; choose it >= 40 n to make the cut negligible.
    """
    if not W.positive:
        raise DomainError("fundthm_check needs d^- > 0")
    N = min(a.order, W.n_max)
    if n < 1 or n > N:
        raise DomainError(f"n must lie in 1..{N}")
    theta = min(float(W.d_minus), 1.0)
    c = np.asarray(a.to_float().coeffs)[: N + 1]
    pf = W.p_float()[: N + 1]
    S = S_sequence(W, a, N)
    conv = fsum_complex(c[: n + 1] * pf[n::-1]) / pf[n]
    x = math.exp(-1.0 / n)
    abel = fsum_complex(c * x ** np.arange(N + 1))
    lhs = abs(conv - abel - S[n] / (n * pf[n]))
    j = np.arange(1, n + 1)
    pj = np.array([p_at(W, math.exp(-1.0 / jj)) for jj in j])
    part1 = math.fsum(np.abs(S[1 : n + 1]) / pj * j ** (theta - 1.0)) / n**theta
    jt = np.arange(n + 1, N + 1)
    part2 = math.fsum(np.abs(S[n + 1 :]) / jt * np.exp(-jt / n)) / p_at(W, x) if N > n else 0.0
    rhs = part1 + part2
    return FundamentalCheck(n=n, lhs=float(lhs), rhs=float(rhs),
                            ratio=float(lhs / rhs) if rhs > 0 else (0.0 if lhs == 0 else math.inf),
                            tail_order=N)


@dataclass(frozen=True)
class VoronoiResult:
    value: object
    abel_value: complex
    tauber: complex


def voronoi_mean(r: PowerSeries, a: PowerSeries, n: int) -> VoronoiResult:
    """``(r_0 s_n + ... + r_n s_0) / (r_0 + ... + r_n)`` with ``s_k = a_0 + ... + a_k``.

    Diagnostics: the Abel proxy ``a(e^{-1/n})`` (over the retained
    coefficients) and the weighted Tauber quantity
    ``(r_0 D_n + ... + r_n D_0) / (sum r) / n`` with ``D_m = sum_{k<=m} k a_k``.
    """
    if n > min(r.order, a.order) or n < 0:
        raise DomainError(f"n = {n} exceeds series orders")
    if r.mode == EXACT and a.mode == EXACT:
        rs = r.coeffs[: n + 1]
        den = sum(rs, Fraction(0))
        if den <= 0:
            raise DomainError("Voronoi weights must have positive sum")
        s = a.partial_sums().coeffs
        D = a.zderiv().partial_sums().coeffs
        val = sum((rs[j] * s[n - j] for j in range(n + 1)), Fraction(0)) / den
        tb = sum((rs[j] * D[n - j] for j in range(n + 1)), Fraction(0)) / den / n if n else 0
        tb = complex(tb)
    else:
        rf = np.asarray(r.to_float().coeffs)[: n + 1]
        den = math.fsum(rf)
        if den <= 0:
            raise DomainError("Voronoi weights must have positive sum")
        af = a.to_float()
        s = np.asarray(af.partial_sums().coeffs)
        D = np.asarray(af.zderiv().partial_sums().coeffs)
        val = fsum_complex(rf * s[n::-1]) / den
        tb = fsum_complex(rf * D[n::-1]) / den / n if n else 0.0
    abel = a.to_float().evaluate(math.exp(-1.0 / n)) if n else a[0]
    return VoronoiResult(value=val, abel_value=complex(abel), tauber=complex(tb))
