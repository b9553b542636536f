"""
Universal constants as truncated Euler products
===============================================

For each genus g the constant is a product over primes l of
``(1 - lambda_l)/(1 - 1/l)``, where ``lambda_l`` is the share of
GSp_2g(F_l) whose characteristic polynomial vanishes at 1.  Here we watch
the truncations over ``l < 2^n`` settle.
"""
from koblitz_gsp.densities import lambda_l, universal_constant

# %%
# The local factors are exact rationals.  Their size relative to 1/l tells
# how quickly the product converges.
for g in (1, 2, 3):
    print(g, [str(lambda_l(g, l)) for l in (2, 3, 5)])

# %%
# Truncated products.  The n = 24 column uses a little over a million primes
# per genus and takes a few seconds each.
print("n   " + "  ".join(f"{'g=' + str(g):<17}" for g in (1, 2, 3, 4)))
for n in (2, 4, 8, 12, 16, 20):
    row = [universal_constant(g, n).value for g in (1, 2, 3, 4)]
    print(f"{n:<3} " + "  ".join(f"{v:.15f}" for v in row))

# %%
# Successive differences shrink roughly like 1/(2^n log 2^n): the remaining
# factors are 1 - O(1/l^2).
vals = [universal_constant(2, n).value for n in (8, 12, 16, 20)]
print([f"{a - b:.3e}" for a, b in zip(vals, vals[1:])])
