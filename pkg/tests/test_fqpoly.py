import cmath
import math
from fractions import Fraction as F

import numpy as np
import pytest

from permstat.errors import DomainError
from permstat.fqpoly import (A_coeff, brute_stats, char_fn_fq, count_irreducible, irreducibles, mean_xi,
                             prob_Dnk_zero_fq, product_identity_series)
from permstat.orderstat import prob_Dnk_zero
from permstat.partitions import CycleType, stat_of

I2 = [2, 1, 2, 3, 6, 9, 18, 30, 56, 99]


def test_irreducible_counts():
    assert [count_irreducible(2, n) for n in range(1, 11)] == I2
    assert count_irreducible(7, 1) == 7
    assert [len(irreducibles(2, 10)[d]) for d in range(1, 11)] == I2
    assert [len(v) for v in irreducibles(3, 6).values()] == [count_irreducible(3, d) for d in range(1, 7)]


def test_A_range():
    for q in (2, 3, 5):
        for n in range(1, 30):
            assert -2 <= A_coeff(q, n) <= 0


@pytest.mark.parametrize("q", [2, 3, 5])
def test_product_identity(q):
    assert product_identity_series(q, 50).tolist() == [1] * 51


def test_hand_factorization_q2_n2():
    B = brute_stats(2, 2)
    law = {a.key: a.prob for a in B.distribution("xi:1")}
    assert law == {0: F(1, 4), 2: F(3, 4)}
    assert B.mean("xi:1") == F(3, 2) == mean_xi(2, 2, 1)
    assert mean_xi(2, 2, 2) == F(1, 4)
    assert {a.key: a.prob for a in brute_stats(2, 1).distribution("xi:1")} == {1: 1}


def test_mean_xi_top_degree():
    for n in range(1, 8):
        assert mean_xi(3, n, n) == F(count_irreducible(3, n), 3**n)


@pytest.mark.parametrize("q,n", [(2, n) for n in range(1, 11)] + [(3, n) for n in range(1, 8)])
def test_brute_means_equal_formula(q, n):
    B = brute_stats(q, n)
    assert B.total == q**n
    for k in range(1, n + 1):
        assert B.mean(f"xi:{k}") == mean_xi(q, n, k)


@pytest.mark.parametrize("n", range(1, 11))
@pytest.mark.parametrize("k", [2, 3])
def test_prob_D_zero_against_brute(n, k):
    B = brute_stats(2, n)
    law = {a.key: a.prob for a in B.distribution(f"Dzero:{k}")}
    assert abs(prob_Dnk_zero_fq(2, n, k) - float(law.get(1, 0))) < 1e-9


def test_prob_D_zero_small_cases():
    assert prob_Dnk_zero_fq(2, 3, 5) == 1.0
    # q = 2, n = 3: the 8 cubics with no factor of even degree
    B = brute_stats(2, 3)
    no_even = sum(c for xi, c in B.types.items() if xi[1] == 0)
    assert prob_Dnk_zero_fq(2, 3, 2) == pytest.approx(no_even / 8, abs=1e-12)


def test_large_q_degenerates_to_permutations():
    q = 999_983  # a prime close to 10^6
    assert abs(prob_Dnk_zero_fq(q, 20, 2) - float(prob_Dnk_zero(20, 2))) < 1e-3


def test_char_fn_at_zero():
    assert char_fn_fq(2, 30, [1.0] * 30, 0.0) == pytest.approx(1, abs=1e-14)


def test_char_fn_against_brute():
    q, n = 2, 3
    B = brute_stats(q, n)
    a = [0.7, 0.0, 0.0]
    for t in (0.4, 1.3, -2.0):
        want = sum(c * cmath.exp(1j * t * a[0] * xi[0]) for xi, c in B.types.items()) / B.total
        assert abs(char_fn_fq(q, n, a, t) - want) < 1e-9


def test_char_fn_general_weights_against_brute():
    q, n = 3, 5
    B = brute_stats(q, n)
    a = np.log(np.arange(1, n + 1)) + 0.1
    t = 0.9
    want = sum(c * cmath.exp(1j * t * float(np.dot(a, xi))) for xi, c in B.types.items()) / B.total
    assert abs(char_fn_fq(q, n, a, t) - want) < 1e-12


def test_order_below_product_on_enumeration():
    B = brute_stats(3, 6)
    for xi in B.types:
        s = stat_of(CycleType(xi))
        assert s.O <= s.P


def test_close_to_permutation_char_fn():
    from permstat.additive import char_fn
    from permstat.weights import make_weights
    n = 500
    L = math.log(n)
    a = [math.log(k) / (L**1.5 / math.sqrt(3)) for k in range(1, n + 1)]
    W = make_weights("uniform", n, exact=False)
    for t in np.linspace(-5, 5, 11):
        if t == 0:
            continue
        assert abs(char_fn(W, a, n, t) - char_fn_fq(2, n, a, t)) * L**1.5 / abs(t) <= 5


def test_guards():
    with pytest.raises(DomainError):
        brute_stats(4, 2)
    with pytest.raises(DomainError):
        brute_stats(2, 24)
    with pytest.raises(DomainError):
        prob_Dnk_zero_fq(2, 5, 1)
