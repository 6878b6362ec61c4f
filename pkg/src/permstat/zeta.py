"""Zeta zeros, complex Gamma and the asymptotic mean of log O_n.

The zero-sum ``sum_rho Gamma(-rho) x**rho`` over nontrivial zeros
``rho = 1/2 + i gamma`` is evaluated by pairing each zero with its
conjugate, ``2 Re sum_{gamma > 0} Gamma(-rho) x**rho``.  Terms decay like
``exp(-pi gamma / 2)``, so a handful of zeros already saturates double
precision.
"""

from __future__ import annotations

import cmath
import hashlib
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.integrate import quad
from scipy.special import digamma

from .arith import euler_phi, prime_divisors
from .errors import DomainError

ZEROS_ENV = "PERMSTAT_ZEROS"
DEFAULT_ZERO_COUNT = 100

# Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients)
_LANCZOS_G = 607 / 128
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


@dataclass(frozen=True)
class ZeroTable:
    gammas: tuple[float, ...]
    source: str = ""
    sha256: str = ""

    @property
    def count(self) -> int:
        return len(self.gammas)


def parse_zeros(text: str, source: str = "") -> ZeroTable:
    vals = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        try:
            vals.append(float(s))
        except ValueError as exc:
            raise DomainError(f"{source or 'zeros'}:{lineno}: cannot parse {s!r}") from exc
    if not vals:
        raise DomainError(f"zero table {source!r} is empty")
    if vals[0] <= 0:
        raise DomainError("zero ordinates must be positive")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise DomainError("zero ordinates must be strictly increasing")
    digest = hashlib.sha256(text.encode()).hexdigest()
    return ZeroTable(tuple(vals), source, digest)


def load_zeros(path: str | Path | None = None) -> ZeroTable:
    """Load a zero table; default is ``$PERMSTAT_ZEROS`` or the bundled 100 zeros."""
    if path is None:
        path = os.environ.get(ZEROS_ENV)
    if path is None:
        text = resources.files("permstat").joinpath("data/zeta_zeros_100.txt").read_text()
        return parse_zeros(text, "bundled:zeta_zeros_100.txt")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read zeros file {path}: {exc}") from exc
    return parse_zeros(text, str(path))


def complex_gamma(z) -> complex:
    """Gamma(z) for complex z (Lanczos for Re z >= 1/2, reflection below)."""
    return cmath.exp(log_complex_gamma(z))


def _log_sin(w: complex) -> complex:
    # log sin(w) without overflow: factor out the dominant exponential
    if w.imag >= 0:
        return -1j * w - cmath.log(-2j) + cmath.log(1 - cmath.exp(2j * w))
    return 1j * w - cmath.log(2j) + cmath.log(1 - cmath.exp(-2j * w))


def log_complex_gamma(z) -> complex:
    """A branch of log Gamma(z), finite even where Gamma(z) under- or overflows."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.log(math.pi) - _log_sin(math.pi * z) - log_gamma_lanczos(1 - z)
    return log_gamma_lanczos(z)


def log_gamma_lanczos(z: complex) -> complex:
    """log Gamma(z) for Re z >= 1/2 (a branch of the logarithm, not the principal one)."""
    z = complex(z) - 1
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def zero_sum(x: float, T: ZeroTable | None = None, count: int = DEFAULT_ZERO_COUNT) -> float:
    """``2 Re sum_{j<count} Gamma(-rho_j) x**rho_j`` with ``rho_j = 1/2 + i gamma_j``."""
    if x <= 1:
        raise DomainError(f"zero_sum needs x > 1, got {x}")
    if T is None:
        T = load_zeros()
    if count > T.count:
        raise DomainError(f"requested {count} zeros, table has {T.count}")
    lx = math.log(x)
    terms = []
    for g in T.gammas[:count]:
        rho = complex(0.5, g)
        terms.append(cmath.exp(log_complex_gamma(-rho) + rho * lx).real)
    return 2.0 * math.fsum(terms)


# -- constants for the S_n^(k) variant ---------------------------------------


def gamma0(k: int) -> float:
    return euler_phi(k) / k


def constant_C0(k: int) -> float:
    """``gamma0 * int_0^1 ((1-y)**(gamma0-1) - 1) / y dy`` with gamma0 = phi(k)/k.

    With ``u = (1-y)**gamma0`` and ``b = 1/gamma0`` the integral becomes
    ``int_0^1 (1 - u**(b-1)) / (1 - u**b) du`` (the factor gamma0 is absorbed),
    whose integrand is bounded: it tends to (b-1)/b at u = 1.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    g = gamma0(k)
    if g == 1.0:
        return 0.0
    b = 1.0 / g

    def f(u):
        if u > 1 - 1e-9:
            return (b - 1) / b
        return (1 - u ** (b - 1)) / (1 - u**b)

    val, err = quad(f, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    if err > 1e-10:
        raise DomainError(f"C0 quadrature did not converge (error estimate {err:g})")
    return val


def constant_C0_digamma(k: int) -> float:
    """Closed form ``-gamma0 (psi(gamma0) + Euler gamma)``, used as a cross-check."""
    g = gamma0(k)
    return -g * (float(digamma(g)) + np.euler_gamma)


def constant_Ck(k: int) -> float:
    """``log gamma0 - 1 - C0/gamma0 - sum_{p|k} log p / (p - 1)``."""
    if k < 2:
        raise DomainError(f"constant_Ck needs k >= 2, got {k}")
    g = gamma0(k)
    return (math.log(g) - 1 - constant_C0(k) / g
            - math.fsum(math.log(p) / (p - 1) for p in prime_divisors(k)))


def asym_mean_logO(variant: str, n: float, T: ZeroTable | None = None,
                   count: int = DEFAULT_ZERO_COUNT, k: int | None = None) -> float:
    """Asymptotic mean of log O_n with the zeta-zero oscillation.

    ``uniform`` and ``fq``: ``L**2/2 - L (log L - 1) + Z(L)``;
    ``snk``: ``g L**2/2 - g L (log L + C(k)) + Z(g L)``, where ``L = log n``,
    ``g = phi(k)/k`` and ``Z`` is :func:`zero_sum`.
    """
    if n < 16:
        raise DomainError(f"asymptotic formula needs n >= 16, got {n}")
    L = math.log(n)
    if variant in ("uniform", "fq"):
        return 0.5 * L * L - L * (math.log(L) - 1) + zero_sum(L, T, count)
    if variant == "snk":
        if k is None or k < 2:
            raise DomainError("snk variant needs k >= 2")
        g = gamma0(k)
        return 0.5 * g * L * L - g * L * (math.log(L) + constant_Ck(k)) + zero_sum(g * L, T, count)
    raise DomainError(f"unknown variant {variant!r}")
