"""Slow, obviously-correct reference implementations used only by the tests."""
from itertools import product

from koblitz_gsp.arith import build_field, legendre


def count_affine_brute(f, p):
    """#{(x, y) in F_p^2 : y^2 = f(x)} by listing the squares."""
    squares = {}
    for y in range(p):
        squares[y * y % p] = squares.get(y * y % p, 0) + 1
    total = 0
    for x in range(p):
        v = sum(c * pow(x, i, p) for i, c in enumerate(f)) % p
        total += squares.get(v, 0)
    return total


def count_points_brute(f, p, k=1, modulus=None):
    """Projective points of y^2 = f(x) over F_{p^k} with explicit field arithmetic."""
    F = build_field(p, k, modulus)
    sq = {}
    for y in F.elements():
        key = (y * y).coeffs
        sq[key] = sq.get(key, 0) + 1
    total = 0
    for x in F.elements():
        v = F.zero()
        for c in reversed(f):
            v = v * x + c
        total += sq.get(v.coeffs, 0)
    deg = len(f) - 1
    if deg % 2 == 1:
        inf = 1
    else:
        inf = 2 if (k % 2 == 0 or legendre(f[-1], p) == 1) else 0
    return total + inf


def gsp_brute_g1(n):
    """All 2x2 matrices mod n with M^t J M = mu J for a unit mu, as (M, mu, char(1))."""
    out = []
    for a, b, c, d in product(range(n), repeat=4):
        det = (a * d - b * c) % n
        from math import gcd

        if gcd(det, n) != 1:
            continue
        # for 2x2, M^t J M = det(M) J
        char1 = (1 - (a + d) + (a * d - b * c)) % n
        out.append(((a, b, c, d), det, char1))
    return out


def jacobi_symbol_sum_g1(f, p):
    return p + 1 + sum(legendre(sum(c * x**i for i, c in enumerate(f)), p) for x in range(p))
