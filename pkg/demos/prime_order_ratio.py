"""
How often is a Jacobian order prime?
====================================

Sweep a genus-2 curve over all good primes, record #J(F_p), and compare the
count of prime orders with pi(x)/log x.  The sweep is kept in memory here;
pass a path to ``SweepCache.open`` to make it resumable.
"""
import sys

from koblitz_gsp.curves import SweepCache, get_curve, order_sweep
from koblitz_gsp.densities import universal_constant
from koblitz_gsp.stats import almost_prime_count, koblitz_ratio, write_ratio_csv

curve = get_curve("g2_x5mx1")
cache = order_sweep(curve, 3000, SweepCache.in_memory(curve.label))
print(len(cache), "good primes; first records:")
for rec in cache.records[:4]:
    print(rec.to_line())

# %%
# The ratio series.  The reference line uses the generic genus-2 constant;
# a particular curve can differ from it at finitely many primes.
series = koblitz_ratio(cache, [250, 500, 1000, 2000, 3000], constant=universal_constant(2, 16).value, g=2)
write_ratio_csv(series, sys.stdout)
print("reference C/g =", series.reference_over_g)

# %%
# Orders with few prime factors are much more common than prime orders.
print([almost_prime_count(cache, r) for r in range(1, 6)])
