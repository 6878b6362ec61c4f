import math
import random
from fractions import Fraction as F

import pytest

from oracles import kth_powers
from permstat.errors import DomainError
from permstat.partitions import (CycleType, brute_force, cycle_types, exact_distribution, expectation,
                                 make_stat, permutation_cycle_type, stat_of, type_probability)
from permstat.snk import pavlov_filter
from permstat.weights import make_weights

KINDS = [("uniform", {}), ("ewens", {"theta": 2}), ("coprime", {"k": 2})]


def law(atoms):
    return {a.key: a.prob for a in atoms}


def test_cycle_types_examples():
    ts = list(cycle_types(3))
    assert {t.alpha for t in ts} == {(3, 0, 0), (1, 1, 0), (0, 0, 1)}
    assert len(list(cycle_types(5))) == 7
    assert [len(list(cycle_types(n))) for n in range(1, 13)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


def test_cycle_types_deterministic():
    assert [t.alpha for t in cycle_types(9)] == [t.alpha for t in cycle_types(9)]


@pytest.mark.parametrize("n", [1, 5, 12, 40])
@pytest.mark.parametrize("kind,kw", KINDS)
def test_type_probabilities_sum_to_one(n, kind, kw):
    W = make_weights(kind, n, **kw)
    assert sum(type_probability(W, t) for t in cycle_types(n)) == 1


def test_type_probability_examples():
    assert type_probability(make_weights("uniform", 3), CycleType((0, 0, 1))) == F(1, 3)
    assert type_probability(make_weights("ewens", 1, theta=F(5, 2)), CycleType((1,))) == 1
    assert type_probability(make_weights("coprime", 2, k=2), CycleType((0, 1))) == 0


def test_statistic_examples():
    s = stat_of(CycleType((5, 0, 0, 0, 0)))
    assert (s.omega, s.logP, s.logO) == (5, 0.0, 0.0)
    s = stat_of(CycleType((0, 2, 0, 0)))
    assert (s.P, s.O) == (4, 2)
    assert s.logP - s.logO == pytest.approx(math.log(2))
    s = stat_of(CycleType((1, 1, 1, 0, 0, 0)))
    assert (s.P, s.O) == (6, 6)


def test_pavlov_examples():
    assert pavlov_filter(2, CycleType((3, 0, 0)))
    assert not pavlov_filter(2, CycleType((1, 1, 0)))
    assert pavlov_filter(2, CycleType((0, 0, 1)))
    assert pavlov_filter(2, CycleType((0, 2, 0, 0)))
    assert all(pavlov_filter(1, t) for t in cycle_types(6))


def test_exact_distribution_examples():
    U = lambda n: make_weights("uniform", n)
    omega = exact_distribution(U(3), 3, "omega")
    assert [(a.value, a.prob) for a in omega] == [(1, F(1, 3)), (2, F(1, 2)), (3, F(1, 6))]
    assert sum(a.value * a.prob for a in omega) == F(11, 6)
    diff = exact_distribution(U(4), 4, "logP-logO")
    assert law(diff) == {1: F(7, 8), 2: F(1, 8)}
    sq = exact_distribution(U(4), 4, "omega", snk_k=2)
    assert law(sq) == {2: F(11, 12), 4: F(1, 12)}


def test_snk_distribution_matches_enumerated_squares():
    squares = kth_powers(4, 2)
    assert len(squares) == 12
    assert law(brute_force(4, "omega", perms=squares)) == {2: F(11, 12), 4: F(1, 12)}


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_pavlov_count_matches_brute_force(n, k):
    count = sum(t.class_size() for t in cycle_types(n) if pavlov_filter(k, t))
    assert count == len(kth_powers(n, k))


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("kind,kw", KINDS)
def test_exact_equals_brute_force(n, kind, kw):
    W = make_weights(kind, n, **kw)
    if W.p[n] == 0:
        pytest.skip("no mass")
    rng = random.Random(1000 * n + len(kind))
    h = [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)]
    for stat in ("omega", "logP", "logO", "D:2", "D:3", make_stat("additive", h)):
        assert law(exact_distribution(W, n, stat)) == law(brute_force(n, stat, W))


def test_brute_force_small_cases():
    assert law(brute_force(1, "omega")) == {1: 1}
    W = make_weights("ewens", 4, theta=2)
    assert law(brute_force(4, "type", W)) == law(exact_distribution(W, 4, "type"))


def test_permutation_cycle_type():
    assert permutation_cycle_type((1, 0, 2, 4, 5, 3)).alpha == (1, 1, 1, 0, 0, 0)


def test_expectation_float():
    atoms = exact_distribution(make_weights("uniform", 6), 6, "logO")
    assert expectation(atoms) == pytest.approx(sum(float(a.prob) * a.value for a in atoms))


def test_logO_le_logP_everywhere():
    for n in range(1, 16):
        for t in cycle_types(n):
            s = stat_of(t)
            assert s.O <= s.P and s.P % s.O == 0


def test_guards():
    with pytest.raises(DomainError):
        brute_force(9, "omega")
    with pytest.raises(DomainError):
        make_stat("nope")
    with pytest.raises(DomainError):
        exact_distribution(make_weights("ewens", 3, theta=2), 3, "omega", snk_k=2)
