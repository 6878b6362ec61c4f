"""log O_n, the logarithm of the order of a random permutation.

On uniform S_n,

    log P_n - log O_n = sum_p sum_s (D_{n,p^s} - 1)^+ log p,

where D_{n,m} counts cycles of length divisible by m.  Since
``E (D-1)^+ = E D - 1 + P(D = 0)``, ``E D_{n,m} = H_{[n/m]} / m`` and
``P(D_{n,m} = 0) = prod_{j <= [n/m]} (1 - 1/(j m))``, the mean
``mu_n = E(log P_n - log O_n)`` is an exact finite sum.  Only m <= n/2
contribute: for a single possible cycle (n/2 < m <= n) the bracket vanishes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from scipy.special import digamma, gammaln, ndtr

from .arith import prime_powers
from .errors import DomainError
from .sampler import sample, sup_distance
from .series import EXACT, FLOAT, series_binom
from .weights import make_weights
from .zeta import constant_C0, gamma0

SQRT2PI = math.sqrt(2 * math.pi)
ET_COEFF = 3**1.5 / (24 * SQRT2PI)
MU_EXACT_LIMIT = 2000


def _harmonic(N: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, N + 1)), Fraction(0))


def expected_Dnk(n: int, k: int) -> Fraction:
    """``E D_{n,k} = H_{[n/k]} / k`` on uniform S_n (0 when k > n)."""
    if n < 0 or k < 1:
        raise DomainError(f"expected_Dnk needs n >= 0, k >= 1, got n={n}, k={k}")
    return _harmonic(n // k) / k


def prob_Dnk_zero(n: int, k: int) -> Fraction:
    """``P(D_{n,k} = 0) = prod_{j <= [n/k]} (1 - 1/(j k))`` on uniform S_n."""
    if k < 2:
        raise DomainError(f"prob_Dnk_zero needs k >= 2, got {k}")
    out = Fraction(1)
    for j in range(1, n // k + 1):
        out *= 1 - Fraction(1, j * k)
    return out


def prob_Dnk_zero_series(n: int, k: int, exact: bool = True):
    """The same probability as ``[(1 - z**k)**(1/k) / (1 - z)]_n``."""
    if k < 2:
        raise DomainError(f"prob_Dnk_zero needs k >= 2, got {k}")
    s = series_binom(k, Fraction(1, k), n, EXACT if exact else FLOAT).partial_sums()
    return s[n] if exact else float(s[n])


def prob_Dnk_zero_float(N, x):
    """``prod_{j<=N} (1 - x/j) = Gamma(N+1-x) / (Gamma(1-x) Gamma(N+1))`` (vectorized)."""
    N = np.asarray(N, dtype=float)
    x = np.asarray(x, dtype=float)
    return np.exp(gammaln(N + 1 - x) - gammaln(1 - x) - gammaln(N + 1))


def mu_brackets_exact(n: int) -> list[tuple[int, int, Fraction]]:
    """``(p, p**s, E(D_{n,p^s} - 1)^+)`` for each prime power, exact."""
    out = []
    for p, m in prime_powers(n):
        out.append((p, m, expected_Dnk(n, m) - 1 + prob_Dnk_zero(n, m)))
    return out


def mu_exact(n: int, exact: bool | None = None) -> float:
    """``E(log P_n - log O_n)`` on uniform S_n."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if exact is None:
        exact = n <= MU_EXACT_LIMIT
    if exact:
        return math.fsum(float(b) * math.log(p) for p, _, b in mu_brackets_exact(n) if b)
    pp = np.array([(p, m) for p, m in prime_powers(n // 2)], dtype=np.int64).reshape(-1, 2)
    if pp.size == 0:
        return 0.0
    p, m = pp[:, 0].astype(float), pp[:, 1].astype(float)
    N = (n // pp[:, 1]).astype(float)
    x = 1.0 / m
    H = digamma(N + 1) + np.euler_gamma
    bracket = x * H - 1 + prob_Dnk_zero_float(N, x)
    return math.fsum(np.maximum(bracket, 0.0) * np.log(p))


def mean_logP(n: int) -> float:
    """``E log P_n = sum_{j<=n} log j / j`` on uniform S_n."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    j = np.arange(2, n + 1, dtype=float)
    return math.fsum(np.log(j) / j)


def mean_logO(n: int) -> float:
    return mean_logP(n) - mu_exact(n)


# -- Edgeworth models for log O_n -------------------------------------------


@dataclass(frozen=True)
class EtModel:
    variant: str
    n: int
    centering: float
    scale: float
    coeff: float  # multiplies (1 - x^2) e^{-x^2/2} / sqrt(log n)
    const: float = 0.0  # extra multiple of e^{-x^2/2} / sqrt(log n)
    shift: float = 0.0  # model evaluated at x + shift
    theta: float | None = None
    k: int | None = None


def et_model(variant: str, n: int, *, theta=None, k: int | None = None,
             mean_matched: bool = True) -> EtModel:
    """Normal-plus-correction model for standardized log O_n.

    ``uniform``: centering E log O_n, scale log^{3/2} n / sqrt 3 and
    correction ``3^{3/2}/(24 sqrt(2 pi)) (1 - x^2) e^{-x^2/2} / sqrt(log n)``.

    ``snk``: scale ``sqrt(gamma0/3) log^{3/2} n`` and correction
    ``r_k(x) e^{-x^2/2} / sqrt(log n)``, ``r_k(x) = sqrt(3/gamma0) (1 - 8 C0 - x^2) / (8 sqrt(2 pi))``.
    The C0 part shifts the model mean by ``sqrt(3/gamma0) C0 / sqrt(log n)``;
    for data centred at its own mean, ``mean_matched=True`` evaluates the
    model at ``x + shift`` so that both have mean zero.  Centering is the
    leading asymptotic ``gamma0/2 log^2 n`` (callers usually re-centre).

    ``ewens``: centering ``theta/2 log^2 n - theta log n loglog n``, scale
    ``sqrt(theta/3) log^{3/2} n``, model Phi.
    """
    if n < 3:
        raise DomainError(f"et_model needs n >= 3, got {n}")
    L = math.log(n)
    if variant == "uniform":
        return EtModel("uniform", n, mean_logO(n) if n <= 10**7 else 0.5 * L * L,
                       L**1.5 / math.sqrt(3), ET_COEFF)
    if variant == "snk":
        if k is None or k < 2:
            raise DomainError("snk model needs k >= 2")
        g = gamma0(k)
        C0 = constant_C0(k)
        a = math.sqrt(3 / g) / (8 * SQRT2PI)
        shift = math.sqrt(3 / g) * C0 / math.sqrt(L) if mean_matched else 0.0
        return EtModel("snk", n, 0.5 * g * L * L, math.sqrt(g / 3) * L**1.5, a, -8 * C0 * a, shift, k=k)
    if variant == "ewens":
        if theta is None or float(theta) <= 0:
            raise DomainError("ewens model needs theta > 0")
        th = float(theta)
        return EtModel("ewens", n, 0.5 * th * L * L - th * L * math.log(L),
                       math.sqrt(th / 3) * L**1.5, 0.0, theta=th)
    raise DomainError(f"unknown variant {variant!r}")


def model_cdf(M: EtModel, x):
    y = np.asarray(x, dtype=float) + M.shift
    L = math.log(M.n)
    corr = (M.coeff * (1 - y * y) + M.const) * np.exp(-0.5 * y * y) / math.sqrt(L)
    out = ndtr(y) + corr
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class EtReport:
    variant: str
    n: int
    R: int
    seed: int
    centering: str
    center: float
    scale: float
    sup_vs_Phi: float
    sup_vs_model: float
    sample_mean: float
    sample_sd: float
    acceptance_rate: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def et_experiment(variant: str, n: int, R: int, seed: int, *, theta=None, k: int | None = None,
                  centering: str | None = None, threads: int | None = None,
                  mean_matched: bool = True) -> EtReport:
    """Sample log O_n, standardize, and compare with Phi and with the model.

    Default centering: the exact mean for ``uniform``; the sample mean for
    ``snk`` and ``ewens`` (whose exact means are not available in closed form).
    """
    M = et_model(variant, n, theta=theta, k=k, mean_matched=mean_matched)
    if variant == "uniform":
        res = sample(None, n, R, seed, threads=threads)
    elif variant == "snk":
        res = sample(None, n, R, seed, snk_k=k, threads=threads)
    else:
        res = sample(make_weights("ewens", n, theta=theta), n, R, seed, threads=threads)
    v = res.logO
    if centering is None:
        centering = "exact" if variant == "uniform" else "sample"
    if centering == "exact":
        if variant != "uniform":
            raise DomainError("exact centering is available for the uniform variant only")
        c = M.centering
    elif centering == "sample":
        c = float(v.mean())
    elif centering == "asymptotic":
        c = M.centering
    else:
        raise DomainError(f"unknown centering {centering!r}")
    z = (v - c) / M.scale
    return EtReport(variant=variant, n=n, R=R, seed=seed, centering=centering, center=c, scale=M.scale,
                    sup_vs_Phi=sup_distance(z, ndtr), sup_vs_model=sup_distance(z, lambda x: model_cdf(M, x)),
                    sample_mean=float(z.mean()), sample_sd=float(z.std()),
                    acceptance_rate=res.acceptance_rate if variant == "snk" else None)
