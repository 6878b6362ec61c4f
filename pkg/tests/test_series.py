import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from permstat.errors import DomainError
from permstat.series import (EXACT, FLOAT, GaussianRational, PowerSeries, series_binom, series_exp,
                             series_inv, series_log, series_mul)

fractions = st.fractions(min_value=-3, max_value=3, max_denominator=12)


def ps(xs, mode=EXACT):
    return PowerSeries(xs, mode)


def test_multiply_examples():
    assert series_mul(ps([1, 1, 0]), ps([1, -1, 0])).tolist() == [1, 0, -1]
    geo = series_inv(ps([1, -1, 0, 0, 0, 0]))
    assert series_mul(geo, ps([1, -1, 0, 0, 0, 0])).tolist() == [1, 0, 0, 0, 0, 0]


def test_exp_square_is_exp_double():
    e1 = series_exp(ps([0, 1] + [0] * 9))
    e2 = series_exp(ps([0, 2] + [0] * 9))
    assert series_mul(e1, e1) == e2
    assert e2.tolist() == [F(2**n, math.factorial(n)) for n in range(11)]


def test_exp_examples():
    assert series_exp(ps([0] + [F(1, j) for j in range(1, 7)])).tolist() == [1] * 7
    assert series_exp(PowerSeries.zeros(4)).tolist() == [1, 0, 0, 0, 0]
    assert series_exp(ps([0, 1, 0, F(1, 3), 0])).tolist() == [1, 1, F(1, 2), F(1, 2), F(3, 8)]


def test_inverse_examples():
    assert series_inv(ps([1, -1, 0, 0])).tolist() == [1, 1, 1, 1]
    e = series_exp(ps([0, 1] + [0] * 7))
    assert series_inv(e).tolist() == [F((-1) ** n, math.factorial(n)) for n in range(9)]
    assert series_inv(ps([2, 0, 0])).tolist() == [F(1, 2), 0, 0]


def test_inverse_needs_unit():
    with pytest.raises(DomainError):
        series_inv(ps([0, 1, 0]))


def test_binomial_examples():
    assert series_binom(1, -1, 5).tolist() == [1] * 6
    assert series_binom(2, F(1, 2), 4).tolist() == [1, 0, F(-1, 2), 0, F(-1, 8)]
    assert series_binom(3, F(1, 3), 3).tolist() == [1, 0, 0, F(-1, 3)]


def test_index_beyond_order_is_error():
    s = ps([1, 2, 3])
    with pytest.raises(IndexError):
        s[3]


def test_mode_mismatch_is_error():
    with pytest.raises(ValueError):
        ps([1, 1]) * ps([1.0, 1.0], FLOAT)


@given(st.lists(fractions, min_size=1, max_size=16))
def test_exp_log_round_trip(xs):
    L = ps([F(0)] + xs)
    assert series_log(series_exp(L)) == L


@given(st.lists(fractions, min_size=1, max_size=10), st.lists(fractions, min_size=1, max_size=10))
def test_exp_is_homomorphism(a, b):
    N = max(len(a), len(b))
    A = ps([F(0)] + a + [F(0)] * (N - len(a)))
    B = ps([F(0)] + b + [F(0)] * (N - len(b)))
    assert series_exp(A + B) == series_mul(series_exp(A), series_exp(B))


@given(st.lists(fractions, min_size=2, max_size=12))
def test_inverse_property(xs):
    xs = [F(1)] + xs[1:]
    a = ps(xs)
    assert series_mul(a, series_inv(a)) == PowerSeries.one(a.order)


def test_float_matches_exact_large_order():
    N = 400
    L = [F(0)] + [F(1 if j % 3 else -1, j) for j in range(1, N + 1)]
    ex = series_exp(ps(L))
    fl = series_exp(ps([float(x) for x in L], FLOAT))
    ref = np.array([float(x) for x in ex.coeffs])
    assert np.max(np.abs(np.asarray(fl.coeffs) - ref) / np.maximum(np.abs(ref), 1e-300)) < 1e-10


def test_float_exp_against_closed_form():
    # exp(sum z^j / (2j)) = (1 - z)^{-1/2}, coefficients binom(2n, n) / 4^n
    N = 3000
    L = np.zeros(N + 1)
    L[1:] = 0.5 / np.arange(1, N + 1)
    got = np.asarray(series_exp(ps(L, FLOAT)).coeffs)
    n = np.arange(N + 1)
    from scipy.special import gammaln
    ref = np.exp(gammaln(2 * n + 1) - 2 * gammaln(n + 1) - n * math.log(4))
    assert np.max(np.abs(got / ref - 1)) < 1e-10


def test_gaussian_rational_arithmetic():
    z = GaussianRational(F(1, 2), F(1, 3))
    w = GaussianRational(1, -1)
    assert z * w == GaussianRational(F(1, 2) + F(1, 3), F(1, 3) - F(1, 2))
    assert (z / w) * w == z
    assert complex(z) == complex(0.5, 1 / 3)
    assert 1 + z == GaussianRational(F(3, 2), F(1, 3))


def test_complex_exact_series():
    L = ps([0, GaussianRational(0, 1), 0, 0])
    e = series_exp(L)
    assert e[2] == GaussianRational(F(-1, 2), 0)
    assert e[3] == GaussianRational(0, F(-1, 6))


def test_partial_sums_and_evaluate():
    s = ps([1, 2, 3])
    assert s.partial_sums().tolist() == [1, 3, 6]
    assert s.evaluate(F(1, 2)) == F(1) + 1 + F(3, 4)
