"""Weighted (Greaves) sieve quantities for almost-prime Jacobian orders.

Covers the weights W and gamma, the sifting sum H, the main-term function
J at V = 1/4, the parameter constraints and their optimal choice, and a
checker for the inequality that converts H into a lower bound for the
number of orders with at most r prime factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .arith import factorize, primes_up_to

__all__ = [
    "V0",
    "GreavesWeighting",
    "SieveParams",
    "ConstraintError",
    "AlmostPrimeBoundReport",
    "almost_prime_lower_bound_check",
    "weight_W",
    "gamma_weight",
    "sifting_H",
    "J_value",
    "r_of",
    "theta_star",
    "selberg_upper_coeff",
    "optimal_params",
    "lemma36_check",
]

V0 = 0.074368


class ConstraintError(ValueError):
    pass


def _as_fraction(theta) -> Fraction:
    if isinstance(theta, float):
        return Fraction(theta).limit_denominator(10**12)
    return Fraction(theta)


@dataclass(frozen=True)
class GreavesWeighting:
    """Sieve window [y^V, y^U) over the primes coprime to ``modulus``."""

    y: float
    U: float
    V: float
    modulus: int = 1

    def __post_init__(self):
        if self.y < 2:
            raise ValueError("y must be at least 2")
        if not self.V < self.U:
            raise ValueError("need V < U")

    def admits(self, p: int) -> bool:
        return gcd(p, self.modulus) == 1

    @property
    def lower(self) -> float:
        return self.y**self.V

    @property
    def upper(self) -> float:
        return self.y**self.U

    def sifting_primes(self) -> np.ndarray:
        """Primes of the sieve set strictly below y^U."""
        top = math.ceil(self.upper) - 1
        ps = primes_up_to(max(top, 1))
        ps = ps[ps < self.upper]
        if self.modulus != 1:
            ps = ps[np.gcd(ps, self.modulus) == 1]
        return ps


def weight_W(p: int, w: GreavesWeighting) -> float:
    t = math.log(p) / math.log(w.y)
    if w.V <= t < w.U:
        return (t - w.V) / (w.U - w.V)
    return 0.0


def gamma_weight(n: int, w: GreavesWeighting) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1.0
    loss = sum(1.0 - weight_W(q, w) for q, _ in factorize(n).factors if w.admits(q))
    return max(0.0, 1.0 - loss)


def sifting_H(orders: Sequence[int], w: GreavesWeighting) -> float:
    """Sum of gamma(gcd(a, P(y^U))) over the list.

    P(y^U) is never formed; divisibility is tested one sieve prime at a time.
    """
    if len(orders) == 0:
        return 0.0
    if min(orders) < 1:
        raise ValueError("orders must be positive")
    big = max(orders) >= 2**63
    a = np.array(orders, dtype=object if big else np.int64)
    loss = np.zeros(len(orders))
    for q in w.sifting_primes():
        q = int(q)
        loss += (a % q == 0) * (1.0 - weight_W(q, w))
    return float(np.maximum(0.0, 1.0 - loss).sum())


def J_value(U: float, V: float = 0.25) -> float:
    """Main-term function of the sieve; only V = 1/4 is available."""
    if V != 0.25:
        raise ValueError("J is only implemented at V = 1/4")
    if not 0.5 <= U < 1:
        raise ValueError("U must lie in [1/2, 1)")
    return U * math.log(1 / U) + (1 - U) * math.log(1 / (1 - U)) - math.log(4 / 3) - 0.25 * math.log(3)


def _check_theta(theta: Fraction) -> None:
    if not Fraction(1, 2) <= theta < 1:
        raise ValueError(f"theta = {theta} outside [1/2, 1)")


def r_of(g: int, theta) -> int:
    """ceil(((9/2) g^3 + g/2)/(1 - theta) - 1/3), exactly."""
    theta = _as_fraction(theta)
    _check_theta(theta)
    value = (Fraction(9, 2) * g**3 + Fraction(g, 2)) / (1 - theta) - Fraction(1, 3)
    return math.ceil(value)


def theta_star(g: int) -> Fraction:
    """Largest theta with r_of(g, theta) = 9 g^3 + g."""
    if g < 1:
        raise ValueError("g must be positive")
    top = Fraction(9, 2) * g**3 + Fraction(g, 2)
    return 1 - top / (9 * g**3 + g + Fraction(1, 3))


def selberg_upper_coeff(g: int, theta) -> float:
    theta = _as_fraction(theta)
    if theta >= 1:
        raise ValueError("theta must be below 1")
    return float((2 * g**2 + 3 * g + 6) / (1 - theta))


@dataclass(frozen=True)
class SieveParams:
    g: int
    theta: float
    xi: float
    U: float
    V: float
    r: int
    B: float
    epsilon: float
    doubled_B: bool = False

    def constraints(self) -> dict[str, bool]:
        g, th, xi, U, V = self.g, self.theta, self.xi, self.U, self.V
        return {
            "1/2 <= theta < 1": 0.5 <= th < 1,
            "1/2 <= U < 1": 0.5 <= U < 1,
            "V0 <= V <= 1/4": V0 <= V <= 0.25,
            "U + 3V >= 1": U + 3 * V >= 1,
            "g < xi(rU + V)": g < xi * (self.r * U + V),
            "theta + xi(g^2 + 3g/2 + 3) < 1": th + xi * (g**2 + 1.5 * g + 3) < 1,
            "theta + xi U((9/2)g^2 + 1/2) < 1": th + xi * U * (4.5 * g**2 + 0.5) < 1,
            "xi > 0": xi > 0,
            "B >= 0": self.B >= 0,
        }

    def violations(self) -> list[str]:
        return [name for name, ok in self.constraints().items() if not ok]

    def weighting(self, x: float, modulus: int = 1) -> GreavesWeighting:
        return GreavesWeighting(x**self.xi, self.U, self.V, modulus)


# Only guaranteed by the parameter choice for g >= 2.
_SMALL_GENUS_EXEMPT = "theta + xi(g^2 + 3g/2 + 3) < 1"


def optimal_params(g: int, theta, epsilon: float = 1e-3, double_B: bool = False) -> SieveParams:
    """V = 1/4, U = 3/4 - eps, xi = (1 - theta)(4/3 + eps)/((9/2) g^2 + 1/2).

    ``double_B`` multiplies B by 2, the factor carried by the sieve's
    2 e^gamma/(U - V) prefactor; off by default.  For g = 1 the constraint
    theta + xi(g^2 + 3g/2 + 3) < 1 is evaluated and reported through
    :meth:`SieveParams.violations` but does not raise.
    """
    th = _as_fraction(theta)
    _check_theta(th)
    if not 0 < epsilon < 0.25:
        raise ValueError("epsilon must lie in (0, 1/4)")
    theta_f = float(th)
    xi = (1 - theta_f) / (4.5 * g**2 + 0.5) * (4 / 3 + epsilon)
    U, V = 0.75 - epsilon, 0.25
    B = J_value(U, V) / (xi * (U - V))
    if double_B:
        B *= 2
    params = SieveParams(g, theta_f, xi, U, V, r_of(g, th), B, epsilon, double_B)
    enforced = [v for v in params.violations() if not (g < 2 and v == _SMALL_GENUS_EXEMPT)]
    if enforced:
        raise ConstraintError("violated: " + "; ".join(enforced))
    return params


@dataclass(frozen=True)
class AlmostPrimeBoundReport:
    x: float
    lhs: int
    H: float
    correction: int
    holds: bool


def almost_prime_lower_bound_check(orders: Iterable[int], params: SieveParams, x: float, modulus: int = 1) -> AlmostPrimeBoundReport:
    """#{a : gcd(a, M) = 1, Omega(a) <= r} >= H - sum_{y^V <= p < y^U} #{a : p^2 | a}.

    ``orders`` are the orders at the primes p <= x; y = x^xi.
    """
    a = [int(v) for v in orders]
    if not a:
        return AlmostPrimeBoundReport(x, 0, 0.0, 0, True)
    if x < 2:
        raise ValueError("x must be at least 2")
    bound = x ** (params.xi * (params.r * params.U + params.V))
    for v in a:
        if v < 1:
            raise ValueError(f"order {v} is not positive")
        if v > bound:
            raise ValueError(f"order {v} exceeds (x^xi)^(rU+V) = {bound:.6g}")
        if gcd(v, modulus) != 1:
            raise ValueError(f"order {v} is not coprime to M = {modulus}")
    lhs = sum(1 for v in a if factorize(v).big_omega <= params.r)
    if x**params.xi < 2:
        # empty sieve window: every gamma is gamma(1) = 1
        return AlmostPrimeBoundReport(x, lhs, float(len(a)), 0, lhs >= len(a))
    w = params.weighting(x, modulus)
    H = sifting_H(a, w)
    correction = 0
    for q in w.sifting_primes():
        q = int(q)
        if q >= w.lower:
            correction += sum(1 for v in a if v % (q * q) == 0)
    return AlmostPrimeBoundReport(x, lhs, H, correction, lhs >= H - correction)


# name used by the command-line contract
lemma36_check = almost_prime_lower_bound_check
