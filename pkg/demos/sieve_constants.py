"""
Sieve constants and a numerical check of the weighted lower bound
=================================================================

The weighted sieve guarantees that infinitely many Jacobian orders have at
most ``r(g, theta)`` prime factors.  We tabulate ``r`` and the optimal
parameters, then test the counting inequality on an actual sweep.
"""
from fractions import Fraction

from koblitz_gsp.curves import SweepCache, get_curve, order_sweep
from koblitz_gsp.sieve import J_value, almost_prime_lower_bound_check, optimal_params, r_of, theta_star

# %%
for g in (1, 2, 3):
    print(g, r_of(g, Fraction(1, 2)), theta_star(g), r_of(g, theta_star(g)))

# %%
# For genus 1 one constraint fails by construction and is only reported.
for g in (1, 2):
    p = optimal_params(g, Fraction(1, 2))
    print(g, f"xi={p.xi:.6f} U={p.U} B={p.B:.4f} J={J_value(p.U):.6f}", p.violations())

# %%
# The inequality on an elliptic curve sweep to 10^4.
curve = get_curve("e_x3x1")
cache = order_sweep(curve, 10**4, SweepCache.in_memory(curve.label))
print(almost_prime_lower_bound_check(cache.orders(), optimal_params(1, Fraction(1, 2)), 10**4))
