"""Exact, asymptotic and Monte Carlo statistics of random permutations.

Weighted measures nu_{n,d} on S_n, the k-th power subsets S_n^(k), and
random monic polynomials over F_q.
"""

from .errors import DomainError
from .partitions import CycleType, brute_force, exact_distribution, make_stat
from .series import EXACT, FLOAT, PowerSeries, series_binom, series_exp, series_inv, series_mul
from .weights import WeightSystem, make_weights, p_series

__all__ = [
    "DomainError",
    "CycleType",
    "brute_force",
    "exact_distribution",
    "make_stat",
    "EXACT",
    "FLOAT",
    "PowerSeries",
    "series_binom",
    "series_exp",
    "series_inv",
    "series_mul",
    "WeightSystem",
    "make_weights",
    "p_series",
]
