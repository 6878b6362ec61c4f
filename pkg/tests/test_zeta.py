import cmath
import math

import mpmath
import numpy as np
import pytest

from permstat.errors import DomainError
from permstat.zeta import (asym_mean_logO, complex_gamma, constant_C0, constant_C0_digamma, constant_Ck,
                           gamma0, load_zeros, parse_zeros, zero_sum)

T = load_zeros()
GRID = [0.3 + 0.2j, 1.7 - 2j, -2.5 + 1j, 4.2 + 7j, -0.5 + T.gammas[0] * 1j, -0.5 - T.gammas[0] * 1j,
        0.5 + 30j, -7.3 - 0.4j]


def test_bundled_table():
    assert T.count == 100
    assert T.gammas[:3] == pytest.approx([14.134725142, 21.022039639, 25.010857580], abs=1e-9)
    assert len(T.sha256) == 64
    for g in T.gammas[:10]:
        assert abs(mpmath.zeta(mpmath.mpc(0.5, g))) < 1e-8


def test_parse_examples(tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("14.134725\n21.022040\n25.010858\n")
    assert load_zeros(p).count == 3
    with pytest.raises(DomainError):
        parse_zeros("")
    with pytest.raises(DomainError):
        parse_zeros("21.0\n14.1\n")
    with pytest.raises(DomainError):
        load_zeros(tmp_path / "missing.txt")


def test_env_override(tmp_path, monkeypatch):
    p = tmp_path / "z.txt"
    p.write_text("# two zeros\n14.134725142\n21.022039639\n")
    monkeypatch.setenv("PERMSTAT_ZEROS", str(p))
    assert load_zeros().count == 2


def test_gamma_classical_values():
    assert complex_gamma(1) == pytest.approx(1, abs=1e-14)
    assert complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    with pytest.raises(DomainError):
        complex_gamma(-2)


@pytest.mark.parametrize("z", GRID)
def test_gamma_against_mpmath(z):
    assert complex_gamma(z) == pytest.approx(complex(mpmath.gamma(z)), rel=1e-12)


@pytest.mark.parametrize("z", GRID)
def test_gamma_recurrence_and_reflection(z):
    assert complex_gamma(z + 1) == pytest.approx(z * complex_gamma(z), rel=1e-12)
    refl = complex_gamma(z) * complex_gamma(1 - z) * cmath.sin(math.pi * z) / math.pi
    assert refl == pytest.approx(1, rel=1e-12)


def test_gamma_at_first_zero_is_tiny():
    assert abs(complex_gamma(-complex(0.5, T.gammas[0]))) < 1e-9


def test_gamma_far_in_strip():
    z = complex(-0.5, T.gammas[-1])
    assert complex_gamma(z) == pytest.approx(complex(mpmath.gamma(z)), rel=1e-11)


def test_zero_sum_examples():
    assert zero_sum(5.0, count=0) == 0
    for x in (2.0, 7.5, 20.0):
        assert abs(zero_sum(x, count=5) - zero_sum(x)) < 1e-15
    for x in (2.0, 10.0, 100.0):
        bound = math.sqrt(x) * sum(abs(complex_gamma(-complex(0.5, g))) for g in T.gammas)
        assert abs(zero_sum(x)) <= 2 * bound


@pytest.mark.parametrize("x", [1.5, 9.0, 42.0, 100.0])
def test_zero_sum_count_invariance(x):
    for c in (10, 20, 40):
        assert abs(zero_sum(x, count=2 * c) - zero_sum(x, count=c)) < 1e-14


def test_zero_sum_against_mpmath():
    x = 9.0
    ref = 2 * sum(mpmath.re(mpmath.gamma(-mpmath.mpc(0.5, g)) * mpmath.power(x, mpmath.mpc(0.5, g)))
                  for g in T.gammas[:10])
    assert zero_sum(x, count=10) == pytest.approx(float(ref), abs=1e-20)


def test_C0_values():
    assert constant_C0(1) == 0
    assert abs(constant_C0(2) - math.log(2)) < 1e-10
    for k in (3, 4, 5, 6, 12, 30):
        assert constant_C0(k) == pytest.approx(constant_C0_digamma(k), abs=1e-11)


def test_C0_three_riemann_oracle():
    # y = 1 - u^3 turns the k=3 integrand into the smooth 3u / (1 + u + u^2)
    N = 10**6
    u = (np.arange(N) + 0.5) / N
    riemann = gamma0(3) * math.fsum(3 * u / (1 + u + u * u)) / N
    assert abs(constant_C0(3) - riemann) < 1e-6


def test_Ck_two():
    # gamma0 = 1/2, C0 = ln 2: C(2) = ln(1/2) - 1 - 2 ln 2 - ln 2
    assert abs(constant_Ck(2) - (-1 - 4 * math.log(2))) < 1e-10


def test_asym_at_e_to_e():
    n = math.e**math.e
    with pytest.raises(DomainError):
        asym_mean_logO("uniform", n)   # below the n >= 16 guard
    L = math.e
    assert 0.5 * L * L - L * (math.log(L) - 1) + zero_sum(L) == pytest.approx(0.5 * math.e**2 + zero_sum(math.e))


def test_asym_variants():
    n = 10**6
    L = math.log(n)
    assert asym_mean_logO("fq", n) == asym_mean_logO("uniform", n)
    g = 0.5
    want = g * L * L / 2 - g * L * (math.log(L) + constant_Ck(2)) + zero_sum(g * L)
    assert asym_mean_logO("snk", n, k=2) == pytest.approx(want)


def test_asym_residual_sweep():
    from permstat.orderstat import mean_logO
    for n in (10**3, 10**4, 10**5):
        r = abs(mean_logO(n) - asym_mean_logO("uniform", n, T, 100))
        assert r / math.log(math.log(n)) ** 2 <= 10
