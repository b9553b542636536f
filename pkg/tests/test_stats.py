import io
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koblitz_gsp.arith import is_prime, primes_up_to
from koblitz_gsp.curves import FrobeniusRecord, SweepCache
from koblitz_gsp.stats import (
    EmptyCacheError,
    almost_prime_count,
    chebotarev_density,
    erdos_kac_cdf,
    format_real,
    gaussian_cdf,
    koblitz_ratio,
    write_chebotarev_csv,
    write_ek_csv,
    write_ratio_csv,
)


def synthetic(orders_by_p, x_max=None):
    recs = [FrobeniusRecord("syn", p, (o,), (o - 1 - p,), o) for p, o in orders_by_p]
    return SweepCache.in_memory("syn", recs, x_max)


PRIMES = [int(p) for p in primes_up_to(1000) if p > 2]


def test_ratio_all_prime():
    # pretend every order equals the next prime after p
    cache = synthetic([(p, next(q for q in range(p + 1, 2 * p + 3) if is_prime(q))) for p in PRIMES], 1000)
    s = koblitz_ratio(cache, [100, 1000])
    for x, count, pi_x, ratio in s.points:
        assert count == pi_x - 1  # p = 2 is not a record
        assert ratio == pytest.approx(count * math.log(x) / pi_x)


def test_ratio_no_prime_orders():
    cache = synthetic([(p, 4 * p) for p in PRIMES], 1000)
    assert all(pt[3] == 0 for pt in koblitz_ratio(cache, [10, 100, 1000]).points)


def test_ratio_reference_lines():
    cache = synthetic([(3, 4)], 10)
    s = koblitz_ratio(cache, [10], constant=0.6, g=2)
    assert s.reference == 0.6 and s.reference_over_g == 0.3


def test_ratio_errors():
    with pytest.raises(EmptyCacheError):
        koblitz_ratio(SweepCache.in_memory("syn"), [10])
    cache = synthetic([(3, 4)], 10)
    with pytest.raises(ValueError):
        koblitz_ratio(cache, [100])
    with pytest.raises(ValueError):
        koblitz_ratio(cache, [7, 5])


def test_ratio_on_sweep(sweep_g1_1e4):
    grid = [100, 1000, 5000, 10000]
    s = koblitz_ratio(sweep_g1_1e4, grid)
    counts = [pt[1] for pt in s.points]
    assert counts == sorted(counts)
    assert all(0 < pt[3] < 5 for pt in s.points)
    assert counts[-1] == almost_prime_count(sweep_g1_1e4, 1, 10000)


@settings(max_examples=30)
@given(st.lists(st.integers(2, 10**6), min_size=1, max_size=50))
def test_almost_prime_monotone(orders):
    cache = synthetic(list(zip(PRIMES, orders)))
    xs = [10, 100, 1000]
    for r in range(0, 5):
        a = [almost_prime_count(cache, r, x) for x in xs]
        assert a == sorted(a)
        assert almost_prime_count(cache, r) <= almost_prime_count(cache, r + 1)


def test_almost_prime_trivial():
    cache = synthetic([(p, 7) for p in PRIMES[:20]])
    assert almost_prime_count(cache, 1) == 20
    assert almost_prime_count(cache, 0) == 0


def test_chebotarev_trivial_and_expected(sweep_g1_1e4):
    rep = chebotarev_density(sweep_g1_1e4, 1)
    assert rep.observed == rep.expected == 1 and rep.z_score == 0
    assert chebotarev_density(sweep_g1_1e4, 6).expected == Fraction(7, 24)
    with pytest.raises(EmptyCacheError):
        chebotarev_density(SweepCache.in_memory("syn"), 2)


def test_chebotarev_z_score_formula():
    cache = synthetic([(p, 2 if i % 2 else 3) for i, p in enumerate(PRIMES[:100])])
    rep = chebotarev_density(cache, 2, g=1)
    obs, exp = rep.observed, rep.expected
    assert obs == Fraction(1, 2)
    z = float(obs - exp) * math.sqrt(100) / math.sqrt(float(exp * (1 - exp)))
    assert rep.z_score == pytest.approx(z)


@pytest.mark.soft
def test_chebotarev_multiplicativity(sweep_g1_1e5, sweep_g1b_1e5):
    for cache in (sweep_g1_1e5, sweep_g1b_1e5):
        o2 = chebotarev_density(cache, 2).observed
        o3 = chebotarev_density(cache, 3).observed
        o6 = chebotarev_density(cache, 6).observed
        assert abs(o6 - o2 * o3) <= 0.05


def test_gaussian_cdf_against_mpmath():
    import mpmath

    for t in (-4, -1.5, -0.1, 0, 0.3, 1, 2.5, 6):
        assert abs(gaussian_cdf(t) - float(mpmath.ncdf(t))) < 1e-7
    assert gaussian_cdf(math.inf) == 1.0


def test_erdos_kac_basic(sweep_g1_1e4):
    cdf = erdos_kac_cdf(sweep_g1_1e4, [-3, -1, 0, 1, 3, math.inf])
    assert list(cdf.empirical) == sorted(cdf.empirical)
    assert cdf.empirical[-1] == 1.0
    assert cdf.sup_distance == max(abs(a - b) for a, b in zip(cdf.empirical, cdf.gaussian))


def test_erdos_kac_symmetric_synthetic():
    # log log 1619 is close to 2; omega = 1 and omega = 3 sit symmetrically around it
    p = 1619
    recs = [FrobeniusRecord("syn", p, (1,), (0,), 2 if i % 2 else 30) for i in range(200)]
    cdf = erdos_kac_cdf(SweepCache(None, "syn", p, recs), [-10, 0, 10])
    assert cdf.empirical == (0.0, 0.5, 1.0)
    assert cdf.mean_omega == 2.0


def test_erdos_kac_requires_records():
    with pytest.raises(EmptyCacheError):
        erdos_kac_cdf(SweepCache.in_memory("syn"), [0])


def test_format_real():
    assert format_real(0.5625) == "0.562500000000000"
    assert format_real(22.0) == "22.0000000000000"
    assert format_real(0.6946382908010261) == "0.694638290801026"


def test_csv_headers():
    cache = synthetic([(3, 4), (5, 7)], 10)
    assert write_ratio_csv(koblitz_ratio(cache, [10])).splitlines()[0] == "x,count,pi_x,ratio"
    assert write_ek_csv(erdos_kac_cdf(cache, [0])).splitlines()[0] == "gamma,empirical,gaussian"
    buf = io.StringIO()
    write_chebotarev_csv([chebotarev_density(cache, 2, 1)], buf)
    assert buf.getvalue().splitlines() == [
        "d,observed_num,observed_den,expected_num,expected_den,z",
        f"2,1,2,2,3,{format_real((0.5 - 2 / 3) * math.sqrt(2) / math.sqrt(2 / 9))}",
    ]
