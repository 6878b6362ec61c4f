"""Additive functions ``h(sigma) = sum_cycles hhat(|kappa|)``.

The normalization, centering and Edgeworth-type correction quantities for
the distribution of h under nu_{n,d}, its characteristic function (the mean
of the multiplicative function ``exp(i t hhat)``), and the Babu-Manstavicius
example whose summands on long cycles do not vanish.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import DomainError
from .multiplicative import mean_value
from .weights import WeightSystem

SQRT2PI = math.sqrt(2 * math.pi)
# fractional parts of j*sqrt(2) are computed from 80 fractional bits
FRAC_BITS = 80
BM_MAX_J = 10**7


def load_hhat_table(path: str | Path, n: int | None = None) -> np.ndarray:
    """Read ``j,value`` rows; missing j default to 0."""
    vals: dict[int, float] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                j = int(row[0])
            except ValueError:
                if not vals:
                    continue
                raise DomainError(f"bad hhat row {row!r}")
            vals[j] = float(row[1])
    if not vals:
        raise DomainError(f"no rows in hhat table {path}")
    N = max(vals) if n is None else n
    return np.array([vals.get(j, 0.0) for j in range(1, N + 1)])


@dataclass(frozen=True)
class EdgeworthQuantities:
    n: int
    B_n: float
    A_n: float
    C_n: float
    L_n3: float
    L_np: float
    p: float
    L2_prime: float
    D_n: float | None  # cross term, uniform weights only


def _hvec(hhat, n: int) -> np.ndarray:
    h = np.asarray([float(x) for x in hhat][:n], dtype=float)
    if len(h) < n:
        raise DomainError(f"hhat table has {len(h)} entries, need {n}")
    return h


def normalize(W: WeightSystem, hhat: Sequence, n: int, p: float = 4.0):
    """Scale ``hhat`` so that ``sum_k d_k htilde(k)**2 / k = 1``.

    Returns ``(htilde, EdgeworthQuantities)``.
    """
    if n < 1 or n > W.n_max:
        raise DomainError(f"n must lie in 1..{W.n_max}")
    h = _hvec(hhat, n)
    k = np.arange(1, n + 1, dtype=float)
    d = W.d_float()[1 : n + 1]
    var = math.fsum(d * h * h / k)
    if var <= 0:
        raise DomainError("sum d_k hhat(k)^2 / k vanishes; cannot normalize")
    B = math.sqrt(var)
    ht = h / B
    pf = W.p_float()
    rel = pf[n - 1 :: -1][:n] / pf[n] - 1.0
    A = math.fsum(d * ht / k)
    C = math.fsum(d * ht / k * rel)
    L3 = math.fsum(np.abs(ht) ** 3 / k)
    Lp = float(np.abs(ht).max()) if math.isinf(p) else math.fsum(np.abs(ht) ** p / k)
    L2p = math.fsum(ht * ht / k * np.abs(rel))
    Dn = None
    if W.kind == "uniform":
        g = ht / k
        suffix = np.concatenate([np.cumsum(g[::-1])[::-1], [0.0]])  # suffix[i] = sum_{l > i} g(l), 0-based
        # sum_k g(k) * sum_{l > n - k} g(l)
        Dn = math.fsum(g * suffix[n - np.arange(1, n + 1)])
    return ht, EdgeworthQuantities(n=n, B_n=B, A_n=A, C_n=C, L_n3=L3, L_np=Lp, p=p, L2_prime=L2p, D_n=Dn)


def char_fn(W: WeightSystem, hhat: Sequence, n: int, t: float) -> complex:
    """``E exp(i t h(sigma))`` under nu_{n,d}."""
    h = _hvec(hhat, n)
    return complex(mean_value(W, np.exp(1j * t * h), n, exact=False))


def edgeworth_cdf(E: EdgeworthQuantities | float, x):
    """``Phi(x) - C_n phi(x)``; ``E`` may be the quantities record or C_n itself."""
    C = E.C_n if isinstance(E, EdgeworthQuantities) else float(E)
    x = np.asarray(x, dtype=float)
    out = ndtr(x) - C * np.exp(-0.5 * x * x) / SQRT2PI
    return float(out) if out.ndim == 0 else out


def frac_sqrt2(j: int) -> float:
    """``{j sqrt 2}`` from an exact integer square root with 80 fractional bits."""
    if j < 0:
        raise DomainError("j must be >= 0")
    if j > BM_MAX_J:
        raise DomainError(f"fractional parts are only certified for j <= {BM_MAX_J}")
    s = math.isqrt(2 * j * j << (2 * FRAC_BITS))  # floor(j sqrt2 * 2^80)
    return (s & ((1 << FRAC_BITS) - 1)) / float(1 << FRAC_BITS)


def bm_d(j: int) -> float:
    """Truncated normal quantile at ``{j sqrt 2}``: zero unless ``|Phi^-1| <= log j``."""
    if j < 2:
        return 0.0
    y = float(ndtri(frac_sqrt2(j)))
    return y if abs(y) <= math.log(j) else 0.0


def babu_manstavicius(n: int) -> np.ndarray:
    """``hhat_n(j) = d(j) (j / n)**0.5`` for j = 1..n."""
    if n < 2:
        raise DomainError(f"babu_manstavicius needs n >= 2, got {n}")
    if n > BM_MAX_J:
        raise DomainError(f"n = {n} exceeds the certified range j <= {BM_MAX_J}")
    return np.array([bm_d(j) * math.sqrt(j / n) for j in range(1, n + 1)])
