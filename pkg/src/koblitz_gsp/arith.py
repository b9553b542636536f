"""Exact integer, modular, finite-field and factorization primitives.

Everything here is a pure function of its arguments.  Field objects are
immutable and may be shared between workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd, isqrt
from random import Random
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "FiniteField",
    "FieldElement",
    "FactoredInteger",
    "build_field",
    "irreducible_polys",
    "quadratic_character",
    "legendre",
    "is_prime",
    "factorize",
    "big_omega",
    "small_omega",
    "log_integral",
    "primes_up_to",
    "prime_pi",
]

MAX_FIELD_SIZE = 2**63


# ---------------------------------------------------------------------------
# Polynomials over F_p (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m over F_p."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm])


def _polymulmod(a: list[int], b: list[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _polymod(out, m, p)


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        inv = pow(b[-1], -1, p)
        monic = [(c * inv) % p for c in b]
        a, b = monic, _polymod(a, monic, p)
    return a


def _has_root(m: Sequence[int], p: int) -> bool:
    """True iff the monic polynomial m has a root in F_p (via gcd with x^p - x)."""
    xp = [1]
    base = [0, 1]
    e = p
    while e:
        if e & 1:
            xp = _polymulmod(xp, base, m, p)
        base = _polymulmod(base, base, m, p)
        e >>= 1
    xp = xp + [0] * (2 - len(xp)) if len(xp) < 2 else list(xp)
    xp[1] = (xp[1] - 1) % p
    return len(_polygcd(list(m), _trim(xp), p)) > 1


def irreducible_polys(p: int, k: int) -> Iterator[tuple[int, ...]]:
    """Monic irreducible polynomials of degree k in {2, 3} over F_p.

    Yielded as coefficient tuples ``(c_0, ..., c_{k-1}, 1)`` in lexicographic
    order of ``(c_{k-1}, ..., c_0)``.  For these degrees irreducible is the
    same as having no root in F_p.
    """
    if k not in (2, 3):
        raise ValueError("only degrees 2 and 3 are supported")
    for high_first in product(range(p), repeat=k):
        m = tuple(reversed(high_first)) + (1,)
        if m[0] == 0:
            continue
        if not _has_root(m, p):
            yield m


# ---------------------------------------------------------------------------
# Finite fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteField:
    """F_{p^k} presented as F_p[t]/(modulus), with k in {1, 2, 3}."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.p**self.k

    def __call__(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, (int, np.integer)):
            coeffs = [int(value) % self.p] + [0] * (self.k - 1)
        else:
            if len(value) != self.k:
                raise ValueError(f"expected {self.k} coordinates, got {len(value)}")
            coeffs = [int(c) % self.p for c in value]
        return FieldElement(tuple(coeffs), self)

    def zero(self) -> "FieldElement":
        return self(0)

    def one(self) -> "FieldElement":
        return self(1)

    def elements(self) -> Iterator["FieldElement"]:
        for high_first in product(range(self.p), repeat=self.k):
            yield FieldElement(tuple(reversed(high_first)), self)

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        if self.k == 1:
            return ((a[0] * b[0]) % self.p,)
        r = _polymulmod(list(a), list(b), self.modulus, self.p)
        return tuple(r + [0] * (self.k - len(r)))


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]
    field: FiniteField

    def _check(self, other: "FieldElement | int") -> "FieldElement":
        if isinstance(other, (int, np.integer)):
            return self.field(int(other))
        if other.field != self.field:
            raise TypeError("elements of different fields")
        return other

    def __add__(self, other):
        o = self._check(other)
        p = self.field.p
        return FieldElement(tuple((x + y) % p for x, y in zip(self.coeffs, o.coeffs)), self.field)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(tuple((-x) % p for x in self.coeffs), self.field)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        o = self._check(other)
        return FieldElement(self.field._mul(self.coeffs, o.coeffs), self.field)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero has no inverse")
            e %= self.field.size - 1
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coeffs)} mod {self.field.p}^{self.field.k})"


def build_field(p: int, k: int, modulus: Sequence[int] | None = None) -> FiniteField:
    """Construct F_{p^k}.

    Without an explicit ``modulus`` the lexicographically first monic
    irreducible polynomial (see :func:`irreducible_polys`) is used, so the
    result is reproducible across runs.  For k = 1 the modulus is ``x``.
    """
    if k not in (1, 2, 3):
        raise ValueError(f"unsupported extension degree k={k}; expected 1, 2 or 3")
    if p < 3 or not is_prime(p):
        raise ValueError(f"p={p} is not an odd prime")
    if p**k >= MAX_FIELD_SIZE:
        raise OverflowError(f"field size {p}^{k} exceeds 2^63")
    if k == 1:
        return FiniteField(p, 1, (0, 1))
    if modulus is None:
        modulus = _first_irreducible(p, k)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if modulus[0] == 0 or _has_root(modulus, p):
            raise ValueError("modulus is reducible over F_p")
    return FiniteField(p, k, tuple(modulus))


@lru_cache(maxsize=4096)
def _first_irreducible(p: int, k: int) -> tuple[int, ...]:
    return next(irreducible_polys(p, k))


def quadratic_character(a: FieldElement, F: FiniteField | None = None) -> int:
    """Quadratic character of a in its field: 0, 1 or -1."""
    if F is not None and a.field != F:
        raise TypeError("element does not belong to the given field")
    if a.is_zero():
        return 0
    q = a.field.size
    r = a ** ((q - 1) // 2)
    return 1 if r.coeffs == a.field.one().coeffs else -1


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


# ---------------------------------------------------------------------------
# Primality and factorization
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    if isqrt(n) ** 2 == n:
        return False
    # Selfridge parameters: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    inv2 = (n + 1) // 2
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality for 0 <= n < 2^128.

    Below 2^64 the Miller-Rabin test on the first twelve primes is
    deterministic.  Above that a Baillie-PSW test is used; it has no known
    counterexample.
    """
    n = int(n)
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    if n < 41 * 41:
        return True
    if n < 2**64:
        return all(_strong_probable_prime(n, a) for a in _SMALL_PRIMES)
    return _strong_probable_prime(n, 2) and _strong_lucas_probable_prime(n)


@dataclass(frozen=True)
class FactoredInteger:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def big_omega(self) -> int:
        return sum(e for _, e in self.factors)

    @property
    def omega(self) -> int:
        return len(self.factors)

    def is_P_r(self, r: int) -> bool:
        """Membership in P_r: at most r prime factors counted with multiplicity."""
        return self.big_omega <= r

    @property
    def value(self) -> int:
        out = 1
        for q, e in self.factors:
            out *= q**e
        return out

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)


_TRIAL_LIMIT = 10**5


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    return tuple(int(q) for q in primes_up_to(_TRIAL_LIMIT))


def _pollard_brent(n: int, rng: Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> FactoredInteger:
    """Complete factorization: trial division below 10^5, then Pollard-Brent rho."""
    n = int(n)
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    found: dict[int, int] = {}
    m = n
    for q in _trial_primes():
        if q * q > m:
            break
        if m % q == 0:
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            found[q] = e
    if m > 1:
        # Seeded so that factorizations are reproducible.
        rng = Random(m)
        stack = [m]
        while stack:
            x = stack.pop()
            if x == 1:
                continue
            if is_prime(x):
                found[x] = found.get(x, 0) + 1
                continue
            r = isqrt(x)
            if r * r == x:
                stack.extend((r, r))
                continue
            d = _pollard_brent(x, rng)
            stack.extend((d, x // d))
    return FactoredInteger(n, tuple(sorted(found.items())))


def big_omega(n: int) -> int:
    return factorize(n).big_omega


def small_omega(n: int) -> int:
    return factorize(n).omega


# ---------------------------------------------------------------------------
# Analytic helpers
# ---------------------------------------------------------------------------

def _adaptive_simpson(f, a: float, b: float, tol: float) -> float:
    def simpson(a, fa, b, fb):
        m = 0.5 * (a + b)
        fm = f(m)
        return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(a, fa, b, fb, m, fm, whole, tol, depth):
        lm, flm, left = simpson(a, fa, m, fm)
        rm, frm, right = simpson(m, fm, b, fb)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return rec(a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) + rec(
            m, fm, b, fb, rm, frm, right, tol / 2, depth - 1
        )

    fa, fb = f(a), f(b)
    m, fm, whole = simpson(a, fa, b, fb)
    return rec(a, fa, b, fb, m, fm, whole, tol, 60)


def log_integral(x: float) -> float:
    """Offset logarithmic integral, the integral of 1/log t from 2 to x.

    Adaptive Simpson on pieces [2, e], [e, e^2], [e^2, e^4], ... so that each
    piece carries a comparable share of the mass.
    """
    if x < 2:
        raise ValueError("log_integral requires x >= 2")
    if x == 2:
        return 0.0

    def f(t):
        return 1.0 / math.log(t)

    cuts = [2.0]
    edge = math.e
    while edge < x:
        cuts.append(edge)
        edge = edge * edge if edge > math.e else math.e**2
    cuts.append(float(x))
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        piece_guess = (b - a) / math.log(b)
        total += _adaptive_simpson(f, a, b, 1e-13 * max(piece_guess, 1.0))
    return total


def primes_up_to(x: int) -> np.ndarray:
    """All primes <= x in increasing order (sieve of Eratosthenes)."""
    x = int(x)
    if x < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(x + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for q in range(3, isqrt(x) + 1, 2):
        if sieve[q]:
            sieve[q * q :: 2 * q] = False
    return np.flatnonzero(sieve).astype(np.int64)


def prime_pi(x: float) -> int:
    return int(primes_up_to(int(math.floor(x))).size)
