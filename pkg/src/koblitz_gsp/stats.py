"""Statistics of Jacobian orders collected by a sweep."""
from __future__ import annotations

import csv
import io
import math
from decimal import Decimal
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, TextIO

import numpy as np

from .arith import is_prime, prime_pi
from .curves import SweepCache
from .densities import lambda_squarefree

__all__ = [
    "RatioSeries",
    "ChebotarevReport",
    "EkCdf",
    "EmptyCacheError",
    "koblitz_ratio",
    "almost_prime_count",
    "chebotarev_density",
    "erdos_kac_cdf",
    "gaussian_cdf",
    "write_ratio_csv",
    "write_ek_csv",
    "write_chebotarev_csv",
]


class EmptyCacheError(ValueError):
    pass


@dataclass(frozen=True)
class RatioSeries:
    points: tuple[tuple[int, int, int, float], ...]
    reference: Optional[float] = None
    reference_over_g: Optional[float] = None


@dataclass(frozen=True)
class ChebotarevReport:
    d: int
    observed: Fraction
    expected: Fraction
    z_score: float
    total: int


@dataclass(frozen=True)
class EkCdf:
    gamma_grid: tuple[float, ...]
    empirical: tuple[float, ...]
    gaussian: tuple[float, ...]
    sup_distance: float
    sample_size: int
    mean_omega: float


def _require_records(cache: SweepCache) -> None:
    if not cache.records:
        raise EmptyCacheError("the cache holds no records")


def koblitz_ratio(
    cache: SweepCache,
    x_grid: Sequence[int],
    constant: Optional[float] = None,
    g: Optional[int] = None,
) -> RatioSeries:
    """#{p <= x : prime order} * log(x) / pi(x) on an increasing grid."""
    _require_records(cache)
    xs = [int(x) for x in x_grid]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("x grid must be strictly increasing")
    if xs and xs[-1] > cache.x_max:
        raise ValueError(f"x = {xs[-1]} lies beyond the cache coverage {cache.x_max}")
    if xs and xs[0] < 2:
        raise ValueError("x grid must start at 2 or later")
    ps = np.array(cache.primes(), dtype=np.int64)
    hits = np.cumsum([is_prime(o) for o in cache.orders()])
    points = []
    for x in xs:
        idx = int(np.searchsorted(ps, x, side="right"))
        count = int(hits[idx - 1]) if idx else 0
        pi_x = prime_pi(x)
        points.append((x, count, pi_x, count * math.log(x) / pi_x))
    ref_g = None
    if constant is not None:
        genus = g if g is not None else cache.records[0].genus
        ref_g = constant / genus
    return RatioSeries(tuple(points), constant, ref_g)


def almost_prime_count(cache: SweepCache, r: int, x: float = math.inf) -> int:
    """#{p <= x : Omega(order) <= r}."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return sum(1 for rec in cache.records if rec.p <= x and rec.factored.big_omega <= r)


def chebotarev_density(cache: SweepCache, d: int, g: Optional[int] = None) -> ChebotarevReport:
    """Observed frequency of d | order against the density lambda_d."""
    _require_records(cache)
    genus = g if g is not None else cache.records[0].genus
    expected = lambda_squarefree(genus, d)
    total = len(cache.records)
    hits = sum(1 for o in cache.orders() if o % d == 0)
    observed = Fraction(hits, total)
    if expected in (0, 1):
        z = 0.0
    else:
        z = float(observed - expected) * math.sqrt(total) / math.sqrt(float(expected * (1 - expected)))
    return ChebotarevReport(d, observed, expected, z, total)


def gaussian_cdf(x: float) -> float:
    if x == math.inf:
        return 1.0
    if x == -math.inf:
        return 0.0
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def erdos_kac_cdf(cache: SweepCache, gamma_grid: Sequence[float]) -> EkCdf:
    """Empirical law of (omega(order) - log log p)/sqrt(log log p) against Phi."""
    recs = [r for r in cache.records if r.p >= 3]
    if not recs:
        raise EmptyCacheError("no records with p >= 3")
    grid = sorted(float(t) for t in gamma_grid)
    omegas = np.array([r.factored.omega for r in recs], dtype=float)
    ll = np.log(np.log(np.array([r.p for r in recs], dtype=float)))
    z = np.sort((omegas - ll) / np.sqrt(ll))
    emp = [float(np.searchsorted(z, t, side="right")) / z.size for t in grid]
    gau = [gaussian_cdf(t) for t in grid]
    sup = max((abs(a - b) for a, b in zip(emp, gau)), default=0.0)
    return EkCdf(tuple(grid), tuple(emp), tuple(gau), sup, int(z.size), float(omegas.mean()))


def format_real(v: float) -> str:
    """15 significant digits, no exponent, locale-independent."""
    if math.isinf(v) or math.isnan(v):
        return repr(v)
    return format(Decimal(f"{v:.14e}"), "f")


def _emit(rows, header, out: Optional[TextIO]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def write_ratio_csv(series: RatioSeries, out: Optional[TextIO] = None) -> str:
    rows = [(x, c, pi, format_real(r)) for x, c, pi, r in series.points]
    return _emit(rows, ("x", "count", "pi_x", "ratio"), out)


def write_ek_csv(cdf: EkCdf, out: Optional[TextIO] = None) -> str:
    rows = [(format_real(t), format_real(e), format_real(gv)) for t, e, gv in zip(cdf.gamma_grid, cdf.empirical, cdf.gaussian)]
    return _emit(rows, ("gamma", "empirical", "gaussian"), out)


def write_chebotarev_csv(reports: Sequence[ChebotarevReport], out: Optional[TextIO] = None) -> str:
    rows = [
        (r.d, r.observed.numerator, r.observed.denominator, r.expected.numerator, r.expected.denominator, format_real(r.z_score))
        for r in reports
    ]
    return _emit(rows, ("d", "observed_num", "observed_den", "expected_num", "expected_den", "z"), out)
