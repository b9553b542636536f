"""
Counting matrices in GSp_2g(Z/n)
================================

The census enumerates every 2g x 2g matrix modulo n that preserves the
standard symplectic form up to a unit, and tallies them by multiplicator,
``char(1) mod n`` and Borel membership.  The tallies are compared with the
closed-form group orders and with the exact densities.
"""
from fractions import Fraction

from koblitz_gsp.densities import coset_density, lambda_l
from koblitz_gsp.symplectic import CensusSpec, borel_orders_closed, census, group_order_closed

# %%
# Group orders and the Borel and unipotent subgroups.
for g, l in [(1, 3), (1, 5), (2, 2), (2, 3)]:
    B, U = borel_orders_closed(g, l)
    print(g, l, census(CensusSpec(g, l, "G")), group_order_closed(g, l), census(CensusSpec(g, l, "B")), B, U)

# %%
# The proportion of elements with ``char(1) = 0`` is ``lambda_l``.
for g, l in [(1, 5), (2, 3)]:
    share = Fraction(census(CensusSpec(g, l, "C")), census(CensusSpec(g, l, "G")))
    print(g, l, share, lambda_l(g, l))

# %%
# Split by multiplicator.  Eigenvalues come in pairs {a, m/a}, so for m = 1
# an eigenvalue 1 is paired with itself and that coset stands apart.
g, l = 1, 7
coset = census(CensusSpec(g, l, "G")) // (l - 1)
for m in range(1, l):
    print(m, Fraction(census(CensusSpec(g, l, "C_coset", m=m)), coset), coset_density(g, l, m))
