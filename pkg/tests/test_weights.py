import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from permstat.errors import DomainError
from permstat.series import PowerSeries, series_mul
from permstat.weights import (first_cycle_dist, load_weight_table, make_weights, p_at, p_series,
                              parse_weight_spec)


def gbinom(x, n):
    out = F(1)
    for i in range(n):
        out = out * (x - i) / (i + 1)
    return out


def test_examples():
    assert list(make_weights("uniform", 10).p) == [1] * 11
    assert list(make_weights("ewens", 5, theta=2).p) == [1, 2, 3, 4, 5, 6]
    assert list(make_weights("coprime", 4, k=2).p) == [1, 1, F(1, 2), F(1, 2), F(3, 8)]
    assert p_series(make_weights("ewens", 3, theta=F(1, 2))).tolist() == [1, F(1, 2), F(3, 8), F(5, 16)]
    # exp(z + z^2/2): 1, 1, 1/2 + 1/2, 1/6 + 1/2
    assert list(make_weights("coprime", 3, k=3).p) == [1, 1, 1, F(2, 3)]


def test_first_cycle_examples():
    assert first_cycle_dist(make_weights("uniform", 7), 7) == [F(1, 7)] * 7
    assert first_cycle_dist(make_weights("ewens", 3, theta=2), 3) == [F(1, 2), F(1, 3), F(1, 6)]
    assert first_cycle_dist(make_weights("coprime", 3, k=2), 3) == [F(1, 3), 0, F(2, 3)]


@pytest.mark.parametrize("theta", [F(1, 2), F(1), F(2), F(7, 3)])
def test_ewens_closed_form(theta):
    from permstat.weights import _p_recurrence
    W = make_weights("ewens", 100, theta=theta)
    assert all(W.p[n] == gbinom(n + theta - 1, n) for n in range(101))
    assert W.p == _p_recurrence(W.d, 100, True)


@pytest.mark.parametrize("W", [make_weights("uniform", 200), make_weights("ewens", 200, theta=F(3, 2)),
                               make_weights("coprime", 200, k=6)], ids=lambda W: W.label())
def test_first_cycle_sums_to_one(W):
    for n in (1, 2, 17, 200):
        assert sum(first_cycle_dist(W, n)) == 1


@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_coprime_reconstructs_geometric(k):
    N = 60
    W = make_weights("coprime", N, k=k)
    L = [F(0)] + [F(1, j) if math.gcd(j, k) > 1 else F(0) for j in range(1, N + 1)]
    from permstat.series import series_exp
    rest = series_exp(PowerSeries(L))
    assert series_mul(p_series(W), rest).tolist() == [1] * (N + 1)


@given(st.lists(st.fractions(min_value=0, max_value=3, max_denominator=5), min_size=1, max_size=12).filter(any))
def test_table_recurrence(d):
    W = make_weights("table", len(d), table={j + 1: v for j, v in enumerate(d)})
    for n in range(1, len(d) + 1):
        assert n * W.p[n] == sum(W.d[k] * W.p[n - k] for k in range(1, n + 1))


def test_float_mode_matches_exact():
    We = make_weights("ewens", 1500, theta=F(3, 2), exact=True)
    Wf = make_weights("ewens", 1500, theta=F(3, 2), exact=False)
    ref = np.array([float(x) for x in We.p])
    assert np.max(np.abs(Wf.p_float() / ref - 1)) < 1e-10


def test_p_at_closed_forms():
    for W in (make_weights("uniform", 3000, exact=False), make_weights("ewens", 3000, theta=2, exact=False),
              make_weights("coprime", 3000, k=2, exact=False)):
        x = 0.99
        direct = math.fsum(W.p_float() * x ** np.arange(3001))
        assert p_at(W, x) == pytest.approx(direct, rel=1e-10)


def test_parse_spec_and_table(tmp_path):
    assert parse_weight_spec("ewens:1/2", 3).theta == F(1, 2)
    assert parse_weight_spec("coprime:3", 3).kind == "coprime"
    path = tmp_path / "w.csv"
    path.write_text("j,d\n1,1\n2,1/2\n3,0\n")
    W = parse_weight_spec(f"table:{path}", 3)
    assert list(W.d) == [0, 1, F(1, 2), 0]
    assert load_weight_table(path) == {1: 1, 2: F(1, 2), 3: 0}


@pytest.mark.parametrize("kind,kw", [("ewens", {"theta": 0}), ("ewens", {"theta": -1}),
                                     ("coprime", {"k": 0}), ("nope", {})])
def test_bad_weights(kind, kw):
    with pytest.raises(DomainError):
        make_weights(kind, 5, **kw)


def test_negative_table_weights_rejected():
    with pytest.raises(DomainError):
        make_weights("table", 2, table={1: 1, 2: -1})
