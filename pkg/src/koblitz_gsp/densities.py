"""Exact densities of the divisibility classes and the Euler products built from them.

``lambda_l(g, l)`` is the proportion of GSp_2g(F_l) whose characteristic
polynomial vanishes at 1, i.e. the heuristic probability that l divides the
order of a generic g-dimensional Jacobian reduction.  The universal constant
is the Euler product of (1 - lambda_l)/(1 - 1/l) over primes l < 2^n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .arith import factorize, is_prime, primes_up_to

__all__ = [
    "ExceptionalData",
    "EulerProductResult",
    "coset_density",
    "lambda_l",
    "lambda_squarefree",
    "euler_deficit",
    "universal_constant",
    "koblitz_constant",
    "sieve_v_partial",
]


def coset_density(g: int, l: int, m: int) -> Fraction:
    """#C^(m)(l) / #G^(m)(l): density of char(1) = 0 on the multiplicator-m coset."""
    if not is_prime(l):
        raise ValueError(f"l={l} is not prime")
    if m % l == 0:
        raise ValueError(f"m={m} is not a unit mod {l}")
    total = Fraction(0)
    running = Fraction(1)
    for r in range(1, g + 1):
        if (m - 1) % l == 0:
            running /= 1 - l ** (2 * r)
            total += l**r * running
        else:
            running /= 1 - l**r
            total += running
    return -total


@lru_cache(maxsize=4096)
def lambda_l(g: int, l: int) -> Fraction:
    """#C(l)/#G(l), averaging the coset densities over the l - 1 multiplicators."""
    trivial = coset_density(g, l, 1)
    if l == 2:
        return trivial
    return (trivial + (l - 2) * coset_density(g, l, 2)) / (l - 1)


def lambda_squarefree(g: int, d: int) -> Fraction:
    if d < 1:
        raise ValueError("d must be positive")
    out = Fraction(1)
    for q, e in factorize(d).factors:
        if e > 1:
            raise ValueError(f"d={d} is not squarefree")
        out *= lambda_l(g, q)
    return out


def _coset_numerators(g: int, l: int) -> tuple[int, int, int, int]:
    # Both coset sums over the common denominators prod(1 - l^(2j)) and prod(1 - l^j).
    d1 = d2 = 1
    for j in range(1, g + 1):
        d1 *= 1 - l ** (2 * j)
        d2 *= 1 - l**j
    n1 = n2 = 0
    for r in range(1, g + 1):
        t1, t2 = l**r, 1
        for j in range(r + 1, g + 1):
            t1 *= 1 - l ** (2 * j)
            t2 *= 1 - l**j
        n1 -= t1
        n2 -= t2
    return n1, d1, n2, d2


def euler_deficit(g: int, l: int) -> float:
    """1 - (1 - lambda_l)/(1 - 1/l), correctly rounded.

    Same exact rational as through :func:`lambda_l`, but assembled as one
    integer quotient so the 10^6-prime products stay fast.
    """
    n1, d1, n2, d2 = _coset_numerators(g, l)
    D = d1 * d2
    if l == 2:
        lam_num, lam_den = n1 * d2, D
    else:
        lam_num, lam_den = n1 * d2 + (l - 2) * n2 * d1, (l - 1) * D
    # (lambda - 1/l) / (1 - 1/l) = (l*lam_num - lam_den) / ((l-1) lam_den)
    return (l * lam_num - lam_den) / ((l - 1) * lam_den)


@dataclass(frozen=True)
class EulerProductResult:
    g: int
    cutoff_exponent: int
    value: float
    factor_count: int


@lru_cache(maxsize=8)
def _primes_below_pow2(n: int) -> np.ndarray:
    return primes_up_to(2**n - 1)


def _log_euler_terms(g: int, primes) -> list[float]:
    return [math.log1p(-euler_deficit(g, int(l))) for l in primes]


def universal_constant(g: int, cutoff_exponent: int) -> EulerProductResult:
    """Product over primes l < 2^n of (1 - lambda_l)/(1 - 1/l).

    The logarithms of the factors are summed with ``math.fsum``, which is
    exactly rounded, so the only error is in the per-factor logarithms.
    """
    n = cutoff_exponent
    if not 1 <= g <= 4:
        raise ValueError("g must be between 1 and 4")
    if not 2 <= n <= 24:
        raise ValueError("cutoff exponent must be between 2 and 24")
    primes = _primes_below_pow2(n)
    value = math.exp(math.fsum(_log_euler_terms(g, primes)))
    return EulerProductResult(g, n, value, int(primes.size))


@dataclass(frozen=True)
class ExceptionalData:
    """The exceptional modulus M (squarefree) and 1 - #C'(M)/#G(M)."""

    M: int
    corrected_mass: Fraction

    def __post_init__(self):
        mass = Fraction(self.corrected_mass)
        object.__setattr__(self, "corrected_mass", mass)
        if self.M < 1:
            raise ValueError("M must be a positive integer")
        if any(e > 1 for _, e in factorize(self.M).factors):
            raise ValueError(f"M={self.M} is not squarefree")
        if not 0 <= mass <= 1:
            raise ValueError("corrected mass must lie in [0, 1]")
        if self.M == 1 and mass != 1:
            raise ValueError("M = 1 forces corrected mass 1")


def koblitz_constant(g: int, data: ExceptionalData, cutoff_exponent: int = 24) -> float:
    """C_A truncated at primes l < 2^n.

    mass / prod_{l | M}(1 - 1/l) * prod_{l < 2^n, l not dividing M} (1 - lambda_l)/(1 - 1/l)
    """
    if data.corrected_mass == 0:
        return 0.0
    bad = {q for q, _ in factorize(data.M).factors}
    primes = [int(l) for l in _primes_below_pow2(cutoff_exponent) if int(l) not in bad]
    logs = _log_euler_terms(g, primes)
    logs.append(math.log(data.corrected_mass.numerator) - math.log(data.corrected_mass.denominator))
    for q in bad:
        logs.append(-math.log1p(-1.0 / q))
    return math.exp(math.fsum(logs))


def sieve_v_partial(g: int, y: float, M: int = 1) -> float:
    """prod_{l <= y, l not dividing M} (1 - lambda_l)."""
    if y < 2:
        return 1.0
    logs = [
        math.log1p(-float(lambda_l(g, int(l))))
        for l in primes_up_to(int(math.floor(y)))
        if gcd(int(l), M) == 1
    ]
    return math.exp(math.fsum(logs))
