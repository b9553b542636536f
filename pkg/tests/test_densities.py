import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from koblitz_gsp.arith import primes_up_to
from koblitz_gsp.densities import (
    ExceptionalData,
    coset_density,
    euler_deficit,
    koblitz_constant,
    lambda_l,
    lambda_squarefree,
    sieve_v_partial,
    universal_constant,
)
from koblitz_gsp.symplectic import CensusSpec, census

SMALL_PRIMES = [int(p) for p in primes_up_to(200)]


def test_coset_density_examples():
    assert coset_density(1, 2, 1) == Fraction(2, 3)
    assert coset_density(1, 3, 2) == Fraction(1, 2)
    assert coset_density(2, 3, 1) == Fraction(231, 640)


def test_coset_density_errors():
    with pytest.raises(ValueError):
        coset_density(1, 5, 10)
    with pytest.raises(ValueError):
        coset_density(1, 4, 1)


@given(st.integers(1, 4), st.sampled_from(SMALL_PRIMES), st.integers(1, 10**6))
def test_coset_density_in_unit_interval(g, l, m):
    if m % l == 0:
        return
    d = coset_density(g, l, m)
    assert 0 < d < 1


def test_lambda_examples():
    assert lambda_l(1, 2) == Fraction(2, 3)
    assert lambda_l(2, 2) == Fraction(26, 45)
    assert lambda_l(2, 3) == Fraction(511, 1280)


def test_lambda_genus_one_closed_form():
    for l in primes_up_to(10**4):
        l = int(l)
        assert lambda_l(1, l) == Fraction(l * l - 2, (l - 1) * (l * l - 1))


@pytest.mark.parametrize("g,l", [(1, 2), (1, 3), (1, 5), (1, 7), (1, 11), (2, 2), (2, 3)])
def test_lambda_times_group_order_is_census(g, l):
    assert lambda_l(g, l) * census(CensusSpec(g, l, "G")) == census(CensusSpec(g, l, "C"))


@pytest.mark.parametrize("g,l", [(1, 3), (1, 5), (1, 7), (1, 11), (2, 3)])
def test_coset_density_times_coset_order(g, l):
    for m in range(1, l):
        coset = census(CensusSpec(g, l, "G")) // (l - 1)
        assert coset_density(g, l, m) * coset == census(CensusSpec(g, l, "C_coset", m=m))


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_l_lambda_tends_to_one(g):
    ls = [int(l) for l in primes_up_to(10**5) if l >= 5]
    vals = [l * float(lambda_l(g, l)) for l in ls[::50]]
    dist = [abs(v - 1) for v in vals]
    assert all(b <= a for a, b in zip(dist, dist[1:]))
    assert dist[-1] < 1e-4


def test_lambda_squarefree():
    assert lambda_squarefree(1, 1) == 1
    assert lambda_squarefree(1, 6) == Fraction(7, 24)
    with pytest.raises(ValueError):
        lambda_squarefree(1, 4)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_fast_factor_equals_exact_rational(g):
    for l in SMALL_PRIMES + [10007, 1000003, 16777213]:
        exact = 1 - (1 - lambda_l(g, l)) / (1 - Fraction(1, l))
        assert euler_deficit(g, l) == float(exact)


def test_universal_constant_small_rows():
    assert universal_constant(1, 2).value == 0.5625
    assert universal_constant(2, 2).value == pytest.approx(0.760989583333333, abs=1e-15)
    r = universal_constant(3, 8)
    assert r.factor_count == 54


def test_universal_constant_against_mpmath_product():
    mpmath.mp.dps = 40
    for g in (1, 3):
        prod = mpmath.mpf(1)
        for l in primes_up_to(2**12 - 1):
            lam = lambda_l(g, int(l))
            prod *= (1 - mpmath.mpf(lam.numerator) / lam.denominator) / (1 - mpmath.mpf(1) / int(l))
        assert abs(universal_constant(g, 12).value - float(prod)) < 1e-14


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_universal_constant_decreasing_with_shrinking_steps(g):
    vals = [universal_constant(g, n).value for n in (4, 8, 12, 16)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    d1, d2 = vals[1] - vals[2], vals[2] - vals[3]
    assert d2 <= d1 / 4


def test_universal_constant_domain():
    with pytest.raises(ValueError):
        universal_constant(5, 8)
    with pytest.raises(ValueError):
        universal_constant(1, 25)


def test_exceptional_data_validation():
    with pytest.raises(ValueError):
        ExceptionalData(4, Fraction(1, 2))
    with pytest.raises(ValueError):
        ExceptionalData(6, Fraction(3, 2))
    with pytest.raises(ValueError):
        ExceptionalData(1, Fraction(1, 2))
    assert ExceptionalData(6, "1/3").corrected_mass == Fraction(1, 3)


def test_koblitz_constant_reduces_to_universal():
    assert koblitz_constant(1, ExceptionalData(1, 1), 12) == pytest.approx(universal_constant(1, 12).value, rel=1e-15)
    assert koblitz_constant(1, ExceptionalData(2, 0), 12) == 0
    # mass 1 - lambda_2 reproduces the generic factor at l = 2
    v = koblitz_constant(2, ExceptionalData(2, Fraction(19, 45)), 2)
    assert v == pytest.approx(universal_constant(2, 2).value, abs=1e-15)


def test_sieve_v_partial():
    assert sieve_v_partial(1, 1.5) == 1.0
    assert sieve_v_partial(1, 3) == pytest.approx(3 / 16, abs=1e-16)
    assert sieve_v_partial(1, 3, M=2) == pytest.approx(9 / 16, abs=1e-16)


def test_sieve_v_partial_mertens_trend():
    # V(y) log(y) e^gamma -> universal constant, up to the tail of the product
    y = 10**4
    v = sieve_v_partial(1, y) * math.log(y) * math.exp(float(sympy.EulerGamma))
    assert v == pytest.approx(universal_constant(1, 14).value, rel=0.02)
