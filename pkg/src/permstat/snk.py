"""Permutations that are k-th powers: S_n^(k) = {x**k : x in S_n}.

A permutation lies in S_n^(k) iff ``q_k(j)`` divides ``alpha_j`` for every j,
where ``q_k(j)`` is the product of the full p-parts of k over the primes p
dividing ``gcd(j, k)``.  Consequently

    sum_n c_n z**n = p(z) * H_k(1; z),    c_n = |S_n^(k)| / n!,

with ``p(z) = exp(sum_{(j,k)=1} z**j / j) = prod_{m|k} (1 - z**m)**(-mu(m)/m)``
and ``H_k(f; z) = prod_{(j,k)>1} (1 + sum_{q_k(j)|s} (f(j) z**j / j)**s / s!)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import gamma as gamma_fn

from .arith import divisors, euler_phi, factorize, mobius, prime_divisors, radical
from .errors import DomainError
from .series import EXACT, FLOAT, PowerSeries, _exact, exact_or_float, series_exp, series_mul
from .weights import make_weights, p_series

# above this order c_n is computed in floating point by default
SNK_EXACT_LIMIT = 300
# H_k(1;1): explicit product up to this j, analytic tail beyond
HK_PRODUCT_CUTOFF = 10**6


def qk(k: int, j: int) -> int:
    """Product of ``p**v_p(k)`` over primes p dividing ``gcd(k, j)``."""
    if k < 1 or j < 1:
        raise DomainError(f"qk needs k, j >= 1, got k={k}, j={j}")
    g = math.gcd(k, j)
    out = 1
    for p, e in factorize(k):
        if g % p == 0:
            out *= p**e
    return out


def pavlov_filter(k: int, t) -> bool:
    """True iff the cycle type ``t`` is the type of some k-th power."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k == 1:
        return True
    return all(a % qk(k, j) == 0 for j, a in enumerate(t.alpha, start=1) if a)


@dataclass(frozen=True)
class SnkStructure:
    k: int
    k0: int
    gamma: tuple  # gamma_0 .. gamma_{k0-1}, exact
    gamma0: Fraction
    gamma_prime: Fraction
    beta: Fraction
    A_k: float

    @property
    def beta_divisor_form(self) -> Fraction:
        """``min_{d|k, d>1} gamma0 * (1 - mu(d) prod_{p|d} 1/(p-1))``, or gamma0 for prime k."""
        if len(factorize(self.k)) == 1 and factorize(self.k)[0][1] == 1:
            return self.gamma0
        vals = []
        for d in divisors(self.k)[1:]:
            prod = Fraction(1)
            for p in prime_divisors(d):
                prod /= p - 1
            vals.append(self.gamma0 * (1 - mobius(d) * prod))
        return min(vals)


def _gamma_j(k: int, j: int) -> Fraction:
    k0 = radical(k)
    l = k0 // math.gcd(j, k0)
    prod = Fraction(1)
    for p in prime_divisors(l):
        prod /= p - 1
    return Fraction(euler_phi(k), k) * mobius(l) * prod


def structure(k: int) -> SnkStructure:
    if k < 2:
        raise DomainError(f"structure needs k >= 2, got {k}")
    k0 = radical(k)
    gam = tuple(_gamma_j(k, j) for j in range(k0))
    g0 = gam[0]
    gp = max([max(g, Fraction(0)) for g in gam[1:]], default=Fraction(0))
    # (1 - z)**gamma0 * p(z) -> prod_{m|k} m**(-mu(m)/m) as z -> 1
    logA = -math.fsum(mobius(m) / m * math.log(m) for m in divisors(k) if m > 1)
    return SnkStructure(k=k, k0=k0, gamma=gam, gamma0=g0, gamma_prime=gp, beta=g0 - gp,
                        A_k=math.exp(logA))


def p_series_from_gammas(k: int, N: int) -> np.ndarray:
    """``prod_j (1 - z e^{-2 pi i j/k0})**(-gamma_j)`` up to z**N, real part (float)."""
    S = structure(k)
    L = np.zeros(N + 1, dtype=np.complex128)
    m = np.arange(1, N + 1)
    for j, g in enumerate(S.gamma):
        w = cmath.exp(-2j * math.pi * j / S.k0)
        # -g * log(1 - w z) = g * sum_m (w z)**m / m
        L[1:] += float(g) * w**m / m
    return np.asarray(series_exp(PowerSeries(L, FLOAT)).coeffs).real


def _fvals(fhat, N: int | None):
    if fhat is None:
        return None
    f = list(fhat)
    if N is not None and len(f) < N:
        raise DomainError(f"fhat table has {len(f)} entries, need {N}")
    return f


def Hk_series(k: int, N: int, fhat: Sequence | None = None, mode: str | None = None) -> PowerSeries:
    """``H_k(f; z)`` up to z**N; ``fhat=None`` means f = 1.

    ``fhat[j - 1]`` is the value on j-cycles.  Only j with ``j * q_k(j) <= N``
    can contribute, so the product is finite.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    f = _fvals(fhat, None)
    if mode is None:
        mode = EXACT if f is None else exact_or_float(f[:N])
    H = PowerSeries.one(N, mode)
    one = Fraction(1) if mode == EXACT else 1.0
    for j in range(2, N + 1):
        if math.gcd(j, k) == 1:
            continue
        q = qk(k, j)
        if j * q > N:
            continue
        fj = one if f is None else f[j - 1]
        if mode == EXACT:
            x = _exact(fj) / j
        else:
            x = complex(fj) / j if isinstance(fj, complex) else float(fj) / j
        terms = {0: one}
        s = q
        while j * s <= N:
            if mode == EXACT:
                terms[j * s] = x**s / math.factorial(s)
            else:
                terms[j * s] = x**s * math.exp(-math.lgamma(s + 1))
            s += q
        H = series_mul(H, PowerSeries.from_terms(terms, N, mode))
    return H


def Hk_at_one(k: int, J: int = HK_PRODUCT_CUTOFF) -> float:
    """``H_k(1; 1) = prod_{(j,k)>1} (1 + sum_{q_k(j)|s} j**-s / s!)``.

    The product runs over j <= J; beyond J each log-factor is
    ``j**-q / q! + O(j**-2q)`` and the residue-class sums are replaced by
    their Euler-Maclaurin leading term ``J**(1-q) / (k (q-1))``.
    """
    if k < 2:
        return 1.0
    qs = np.array([qk(k, r) if math.gcd(r, k) > 1 else 0 for r in range(1, k + 1)])
    j = np.arange(2, J + 1)
    q = qs[(j - 1) % k]
    keep = q > 0
    j, q = j[keep].astype(float), q[keep]
    logs = np.zeros(len(j))
    for qv in np.unique(q):
        sel = q == qv
        x = 1.0 / j[sel]
        s_terms = np.zeros(sel.sum())
        s = int(qv)
        while True:
            t = x**s / math.factorial(s)
            s_terms += t
            if t.max() < 1e-18:
                break
            s += int(qv)
        logs[sel] = np.log1p(s_terms)
    total = math.fsum(logs)
    for qv in qs[qs > 0]:
        total += J ** (1.0 - qv) / (k * (qv - 1)) / math.factorial(int(qv))
    return math.exp(total)


def snk_density(k: int, n: int, exact: bool | None = None):
    """``c_n = |S_n^(k)| / n!`` as ``[p(z) H_k(1; z)]_n``; Fraction when exact."""
    if k < 1 or n < 0:
        raise DomainError(f"snk_density needs k >= 1 and n >= 0, got k={k}, n={n}")
    if exact is None:
        exact = n <= SNK_EXACT_LIMIT
    if k == 1:
        return Fraction(1) if exact else 1.0
    W = make_weights("coprime", n, k=k, exact=exact)
    c = series_mul(p_series(W), Hk_series(k, n, mode=W.mode))[n]
    return c if exact else float(c)


def snk_density_asym(k: int, n: int) -> float:
    """Leading asymptotic ``n**(gamma0-1) / Gamma(gamma0) * A_k * H_k(1;1)``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if k == 1:
        return 1.0
    S = structure(k)
    g0 = float(S.gamma0)
    return n ** (g0 - 1) / gamma_fn(g0) * S.A_k * Hk_at_one(k)


@dataclass(frozen=True)
class SnkMeanReport:
    exact_mean: complex
    main_term: complex
    error: float
    c_n: float


def _h_factor_at_one(x, q: int) -> complex:
    """``1 + sum_{s >= 1, q|s} x**s / s!`` for |x| <= 1/2 (converges fast)."""
    tot, s = 1.0 + 0j, q
    while True:
        t = x**s / math.factorial(s)
        tot += t
        if abs(t) < 1e-18:
            return tot
        s += q


def snk_main_term(k: int, fhat: Sequence, n: int) -> complex:
    """exp{sum_{j<=n,(j,k)=1} (f(j)-1)/j} * prod_{j<=n,(j,k)>1} H-factor(f)/H-factor(1)."""
    f = [complex(x) for x in _fvals(fhat, n)[:n]]
    log_main = sum((f[j - 1] - 1) / j for j in range(1, n + 1) if math.gcd(j, k) == 1)
    ratio = 1.0 + 0j
    for j in range(2, n + 1):
        if math.gcd(j, k) > 1:
            q = qk(k, j)
            ratio *= _h_factor_at_one(f[j - 1] / j, q) / _h_factor_at_one(1.0 / j, q)
    return cmath.exp(log_main) * ratio


def snk_mean_value(k: int, fhat: Sequence, n: int, exact: bool | None = None):
    """Exact mean of the multiplicative f over S_n^(k) (any f values).

    ``[exp{sum_{(j,k)=1} f(j) z^j / j} H_k(f; z)]_n / c_n``; a Fraction or
    GaussianRational in exact mode, complex otherwise.
    """
    if k < 1 or n < 1:
        raise DomainError(f"snk mean needs k, n >= 1, got k={k}, n={n}")
    f = _fvals(fhat, n)[:n]
    if exact is None:
        exact = n <= SNK_EXACT_LIMIT and exact_or_float(f) == EXACT
    mode = EXACT if exact else FLOAT
    if exact:
        f = [_exact(x) for x in f]
        L = PowerSeries([0] + [f[j - 1] / j if math.gcd(j, k) == 1 else 0 for j in range(1, n + 1)], EXACT)
    else:
        fc = np.array([complex(x) for x in f])
        Lc = np.zeros(n + 1, dtype=np.complex128)
        js = np.arange(1, n + 1)
        cop = np.gcd(js, k) == 1
        Lc[1:][cop] = fc[cop] / js[cop]
        L = PowerSeries(Lc, FLOAT)
    num = series_mul(series_exp(L), Hk_series(k, n, fhat=f, mode=mode))[n]
    cn = snk_density(k, n, exact=exact)
    return num / cn if exact else complex(num) / cn


def mean_mult_snk(k: int, fhat: Sequence, n: int, exact: bool | None = None) -> SnkMeanReport:
    """Mean of f over S_n^(k) next to its main-term approximation (|f| <= 1)."""
    if k < 1 or n < 1:
        raise DomainError(f"mean_mult_snk needs k, n >= 1, got k={k}, n={n}")
    f = _fvals(fhat, n)[:n]
    if any(abs(complex(x)) > 1 + 1e-12 for x in f):
        raise DomainError("mean_mult_snk requires |fhat(j)| <= 1")
    val = complex(snk_mean_value(k, f, n, exact=exact))
    main = snk_main_term(k, f, n)
    return SnkMeanReport(exact_mean=val, main_term=main, error=abs(val - main),
                         c_n=float(snk_density(k, n, exact=False if n > SNK_EXACT_LIMIT else None)))
