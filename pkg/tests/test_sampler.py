import math
from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.special import ndtr
from scipy.stats import chi2, norm

from permstat.errors import DomainError
from permstat.partitions import CycleType, cycle_types, stat_of, type_probability
from permstat.sampler import empirical_cdf, sample, sample_cycle_type, sample_snk, sup_distance
from permstat.snk import pavlov_filter, snk_density
from permstat.weights import make_weights

KINDS = [("uniform", {}), ("ewens", {"theta": 2}), ("coprime", {"k": 2})]


def chi_square_p(counts, probs):
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probs, dtype=float)
    keep = probs > 0
    assert counts[~keep].sum() == 0
    exp = probs[keep] * counts.sum()
    stat = np.sum((counts[keep] - exp) ** 2 / exp)
    return chi2.sf(stat, keep.sum() - 1)


@pytest.mark.parametrize("kind,kw", KINDS)
def test_full_type_chi_square(kind, kw):
    n, R = 6, 10**6
    W = make_weights(kind, n, **kw)
    res = sample(None if kind == "uniform" else W, n, R, seed=11, store_types=True)
    got = Counter(map(tuple, res.types))
    types = list(cycle_types(n))
    probs = [float(type_probability(W, t)) for t in types]
    assert chi_square_p([got.get(t.alpha, 0) for t in types], probs) > 0.001


def test_uniform_first_cycle_law():
    # the first length drawn is the cycle of a uniformly chosen point: uniform on 1..n
    from permstat.weights import first_cycle_dist
    assert first_cycle_dist(make_weights("uniform", 9), 9) == [F(1, 9)] * 9


def test_ewens_first_cycle_chi_square():
    # the 3-cycle and 2+1 types pin down the first-length law for n = 3
    W = make_weights("ewens", 3, theta=2)
    res = sample(W, 3, 10**6, seed=3, store_types=True)
    a1 = res.types[:, 0]
    # first length 1 <=> alpha = (3,0,0) or a 1 drawn before the 2: P = 1/2
    omega = res.omega
    counts = [np.sum(omega == 3), np.sum(omega == 2), np.sum(omega == 1)]
    probs = [float(type_probability(W, CycleType(t))) for t in [(3, 0, 0), (1, 1, 0), (0, 0, 1)]]
    assert chi_square_p(counts, probs) > 0.001
    assert a1.max() == 3


def test_n_equals_one():
    res = sample(make_weights("ewens", 1, theta=3), 1, 100, seed=0, store_types=True)
    assert np.all(res.types[:, 0] == 1) and np.all(res.omega == 1)


def test_statistics_are_consistent():
    n = 50
    res = sample(None, n, 2000, seed=5, store_types=True, dks=(2, 3), hhat=np.arange(1, n + 1) ** 0.5)
    for i in range(0, 2000, 97):
        t = CycleType(tuple(int(x) for x in res.types[i]))
        s = stat_of(t)
        assert t.n == n
        assert res.omega[i] == s.omega
        assert res.logP[i] == pytest.approx(s.logP, abs=1e-9)
        assert res.logO[i] == pytest.approx(s.logO, abs=1e-9)
        assert res.D[2][i] == sum(t.count(j) for j in range(2, n + 1, 2))
        assert res.additive[i] == pytest.approx(sum(math.sqrt(j) * t.count(j) for j in t.lengths()))
    assert np.all(res.logO <= res.logP + 1e-9)


def test_reproducible_and_thread_independent():
    a = sample(None, 300, 3000, seed=99, threads=1)
    b = sample(None, 300, 3000, seed=99, threads=4)
    c = sample(None, 300, 3000, seed=99)
    assert np.array_equal(a.logO, b.logO) and np.array_equal(a.logO, c.logO)
    d = sample(None, 300, 3000, seed=100)
    assert not np.array_equal(a.logO, d.logO)


def test_replicates_depend_only_on_seed_and_index():
    a = sample(None, 100, 50, seed=7)
    b = sample(None, 100, 500, seed=7)
    assert np.array_equal(a.logP, b.logP[:50])


def test_nearby_seeds_give_different_streams():
    # a plain seed XOR index key would make seeds 2 and 3 permutations of each other
    a = sample(None, 200, 4096, seed=2)
    b = sample(None, 200, 4096, seed=3)
    assert not np.array_equal(np.sort(a.logO), np.sort(b.logO))


def test_snk_acceptance():
    r4 = sample(None, 4, 10**5, seed=1, snk_k=2)
    assert r4.acceptance_rate == pytest.approx(0.5, abs=0.01)
    r100 = sample(None, 100, 4000, seed=1, snk_k=2)
    c = snk_density(2, 100, exact=False)
    assert 0.5 * c <= r100.acceptance_rate <= 2 * c


def test_snk_k1_accepts_immediately():
    r = sample(None, 20, 500, seed=1, snk_k=1)
    assert np.all(r.trials == 1)


def test_snk_samples_pass_filter():
    r = sample(None, 12, 3000, seed=8, snk_k=6, store_types=True)
    for row in r.types[:300]:
        assert pavlov_filter(6, CycleType(tuple(int(x) for x in row)))
    rng = np.random.default_rng(0)
    for _ in range(50):
        assert pavlov_filter(3, sample_snk(3, 9, rng))


def test_python_sampler_law():
    W = make_weights("coprime", 5, k=2)
    rng = np.random.default_rng(2)
    types = list(cycle_types(5))
    got = Counter(sample_cycle_type(W, 5, rng).alpha for _ in range(20000))
    probs = [float(type_probability(W, t)) for t in types]
    assert chi_square_p([got.get(t.alpha, 0) for t in types], probs) > 0.001


def test_metadata():
    r = sample(None, 10, 5, seed=4)
    m = r.metadata()
    assert m["seed"] == 4 and m["R"] == 5 and "xoshiro256**" in m["prng"]


def test_guards():
    with pytest.raises(DomainError):
        sample(None, 10, 0, seed=1)
    with pytest.raises(DomainError):
        sample(None, 10, 5, seed=-1)
    with pytest.raises(DomainError):
        sample(make_weights("ewens", 10, theta=2), 10, 5, seed=1, snk_k=2)
    with pytest.raises(DomainError):
        sample(make_weights("ewens", 10, theta=2), 11, 5, seed=1)
    with pytest.raises(DomainError):
        sample(None, 100, 5, seed=1, store_types=True)


def test_sup_distance_examples():
    v = 0.3
    assert sup_distance([v], ndtr) == pytest.approx(max(ndtr(v), 1 - ndtr(v)))
    two = sup_distance([-1.0, 1.0], ndtr)
    p = ndtr(-1.0)
    assert two == pytest.approx(max(p, 0.5 - p, abs(0.5 - (1 - p)), 1 - (1 - p)))
    R = 10**4
    z = np.random.default_rng(12).standard_normal(R)
    assert sup_distance(z, ndtr) < 3 / math.sqrt(R)


def test_sup_distance_matches_scipy_ks():
    from scipy.stats import kstest
    z = np.random.default_rng(1).standard_normal(500)
    assert sup_distance(z, ndtr) == pytest.approx(kstest(z, norm.cdf).statistic, abs=1e-12)


def test_empirical_cdf_left_continuous():
    F = empirical_cdf([1, 2, 2, 3])
    assert F(2) == 0.25 and F(2.0001) == 0.75 and F(10) == 1
    with pytest.raises(DomainError):
        empirical_cdf([])
