"""Matrices over Z/nZ, the symplectic similitude group and its exact censuses.

The symplectic form is J = [[0, I_g], [-I_g, 0]].  With this J the Borel
subgroup is the set of block matrices ``[[T, T S], [0, mu T^{-t}]]`` with T
upper triangular and S symmetric; the lower-right block is then lower
triangular.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import gcd, prod
from typing import Optional, Sequence

import numpy as np

from .arith import is_prime

__all__ = [
    "MatrixModN",
    "CharPolyInt",
    "CensusSpec",
    "CensusGuardError",
    "CENSUS_GUARD",
    "CLASS_TAGS",
    "sympl_multiply",
    "is_gsp",
    "char_poly",
    "char_at_one",
    "similitude_symmetric",
    "sp_order_closed",
    "group_order_closed",
    "borel_orders_closed",
    "borel_ratio_bounds",
    "census",
    "census_histogram",
    "borel_histogram",
]

CENSUS_GUARD = 10**10
CLASS_TAGS = ("G", "Sp", "B", "U", "C", "C_B", "C_coset", "C_prime")


class CensusGuardError(ValueError):
    """The requested census exceeds the exhaustive-search budget."""


@dataclass(frozen=True)
class MatrixModN:
    g: int
    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        d = 2 * self.g
        if not 1 <= self.g <= 4:
            raise ValueError("genus must be between 1 and 4")
        if self.n < 2:
            raise ValueError("modulus must be at least 2")
        if len(self.entries) != d * d:
            raise ValueError(f"expected {d * d} entries, got {len(self.entries)}")
        object.__setattr__(self, "entries", tuple(int(e) % self.n for e in self.entries))

    @property
    def dim(self) -> int:
        return 2 * self.g

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], n: int) -> "MatrixModN":
        d = len(rows)
        if d % 2 or any(len(r) != d for r in rows):
            raise ValueError("need a square matrix of even dimension")
        return cls(d // 2, n, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, g: int, n: int) -> "MatrixModN":
        d = 2 * g
        return cls(g, n, tuple(int(i == j) for i in range(d) for j in range(d)))

    @classmethod
    def standard_form(cls, g: int, n: int) -> "MatrixModN":
        """The matrix J of the standard symplectic form."""
        d = 2 * g
        rows = [[0] * d for _ in range(d)]
        for i in range(g):
            rows[i][i + g] = 1
            rows[i + g][i] = -1
        return cls.from_rows(rows, n)

    def rows(self) -> list[list[int]]:
        d = self.dim
        return [list(self.entries[i * d : (i + 1) * d]) for i in range(d)]

    def to_array(self) -> np.ndarray:
        return np.array(self.rows(), dtype=np.int64)

    def transpose(self) -> "MatrixModN":
        return MatrixModN.from_rows([list(c) for c in zip(*self.rows())], self.n)

    def __matmul__(self, other: "MatrixModN") -> "MatrixModN":
        return sympl_multiply(self, other)


def sympl_multiply(A: MatrixModN, B: MatrixModN) -> MatrixModN:
    if A.g != B.g or A.n != B.n:
        raise ValueError("dimension or modulus mismatch")
    a, b = A.rows(), B.rows()
    d = A.dim
    rows = [[sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d)] for i in range(d)]
    return MatrixModN.from_rows(rows, A.n)


def is_gsp(M: MatrixModN) -> Optional[int]:
    """The multiplicator mu with M^t J M = mu J, or None if M is not in GSp."""
    J = MatrixModN.standard_form(M.g, M.n)
    P = M.transpose() @ J @ M
    mu = P.rows()[0][M.g]
    if gcd(mu, M.n) != 1:
        return None
    target = [(mu * x) % M.n for x in J.entries]
    return mu if list(P.entries) == target else None


# ---------------------------------------------------------------------------
# Characteristic polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharPolyInt:
    """det(xI - M) as ``coefficients`` (leading 1 first); reduced mod ``n`` if set."""

    g: int
    coefficients: tuple[int, ...]
    n: Optional[int] = None

    def __post_init__(self):
        if len(self.coefficients) != 2 * self.g + 1 or self.coefficients[0] != 1:
            raise ValueError("characteristic polynomial must be monic of degree 2g")

    @property
    def a(self) -> tuple[int, ...]:
        """Coefficients a_1..a_2g of x^(2g-1), ..., x^0."""
        return self.coefficients[1:]

    def __call__(self, x: int) -> int:
        v = 0
        for c in self.coefficients:
            v = v * x + c
        return v % self.n if self.n else v

    def at_one(self) -> int:
        return self(1)


def _charpoly_integer(rows: list[list[int]]) -> list[int]:
    """Faddeev-LeVerrier over Z; every division is exact."""
    d = len(rows)
    coeffs = [1]
    Mk = [[0] * d for _ in range(d)]
    c = 1
    for k in range(1, d + 1):
        # Mk <- A Mk + c I
        Mk = [[sum(rows[i][t] * Mk[t][j] for t in range(d)) + (c if i == j else 0) for j in range(d)] for i in range(d)]
        AM_trace = sum(rows[i][t] * Mk[t][i] for i in range(d) for t in range(d))
        c = -AM_trace // k
        assert c * k == -AM_trace
        coeffs.append(c)
    return coeffs


def char_poly(M: MatrixModN) -> CharPolyInt:
    """Characteristic polynomial of the lift of M to [0, n), reduced mod n."""
    coeffs = _charpoly_integer(M.rows())
    return CharPolyInt(M.g, tuple([1] + [c % M.n for c in coeffs[1:]]), M.n)


def char_at_one(M: MatrixModN) -> int:
    return char_poly(M).at_one()


def similitude_symmetric(a: Sequence[int], g: int, m: int, n: Optional[int] = None) -> bool:
    """Check a_{2g-i} = m^(g-i) a_i for i = 0..g-1 (a_0 = 1), optionally mod n."""
    full = [1] + list(a)
    if len(full) != 2 * g + 1:
        raise ValueError("need 2g coefficients a_1..a_2g")
    for i in range(g):
        lhs, rhs = full[2 * g - i], m ** (g - i) * full[i]
        if n is None:
            if lhs != rhs:
                return False
        elif (lhs - rhs) % n:
            return False
    return True


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def _require_prime(l: int) -> None:
    if not is_prime(l):
        raise ValueError(f"l={l} is not prime")


def sp_order_closed(g: int, l: int) -> int:
    _require_prime(l)
    return l ** (g * g) * prod(l ** (2 * i) - 1 for i in range(1, g + 1))


def group_order_closed(g: int, l: int, k: int = 1) -> int:
    """#GSp_2g(Z/l^k Z) = #GSp_2g(F_l) * l^((k-1)(2g^2+g+1)).

    The reduction map mod l is onto and each fibre has l^(dim GSp_2g)
    elements per lifting step.
    """
    _require_prime(l)
    if k < 1 or g < 1:
        raise ValueError("need g >= 1 and k >= 1")
    e = (2 * k - 1) * g * g + (k - 1) * g + (k - 1)
    return (l - 1) * l**e * prod(l ** (2 * i) - 1 for i in range(1, g + 1))


def borel_orders_closed(g: int, l: int, k: int = 1) -> tuple[int, int]:
    """(#B, #U) over Z/l^k Z for k in {1, 2}.

    The unipotent count at k = 2 is l^(2g^2), the parametrization count
    (T unipotent, mu = 1, S symmetric); it is checked against the census.
    """
    _require_prime(l)
    if k == 1:
        return (l - 1) ** (g + 1) * l ** (g * g), l ** (g * g)
    if k == 2:
        return (l - 1) ** (g + 1) * l ** (2 * g * g + g + 1), l ** (2 * g * g)
    raise ValueError("Borel orders are only available for k in {1, 2}")


def borel_ratio_bounds(g: int, l: int) -> tuple[Fraction, Fraction]:
    """Lower and upper bounds for #C_B(l)/#B(l), valid for l > g + 1."""
    den = Fraction((l - 1) ** (g + 1))
    lower = 1 - (l - 2) ** g * (l - 2) / den
    upper = 1 - (l - 2) ** g * (l - 1 - g) / den
    return lower, upper


# ---------------------------------------------------------------------------
# Census
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CensusSpec:
    g: int
    n: int
    class_tag: str
    m: Optional[int] = None
    M: Optional[int] = None

    def __post_init__(self):
        if self.class_tag not in CLASS_TAGS:
            raise ValueError(f"unknown class {self.class_tag!r}; expected one of {CLASS_TAGS}")
        if self.class_tag == "C_coset":
            if self.m is None or gcd(self.m, self.n) != 1:
                raise ValueError(f"C_coset needs a multiplicator m that is a unit mod {self.n}")
        if self.class_tag == "C_prime":
            if self.M is None or self.M < 1 or self.n % self.M:
                raise ValueError(f"C_prime needs a modulus M dividing n={self.n}")


@lru_cache(maxsize=None)
def _leibniz(d: int) -> tuple[np.ndarray, np.ndarray]:
    perms = list(permutations(range(d)))
    signs = []
    for p in perms:
        inv = sum(1 for i in range(d) for j in range(i + 1, d) if p[i] > p[j])
        signs.append(-1 if inv % 2 else 1)
    return np.array(perms, dtype=np.int64), np.array(signs, dtype=np.int64)


@lru_cache(maxsize=None)
def census_histogram(g: int, n: int, nchunks: int = 64) -> np.ndarray:
    """Exhaustive histogram ``h[mu, char(1) mod n, b]`` over GSp_2g(Z/nZ).

    ``b`` is 0 outside the Borel subgroup, 1 in B but not unipotent and 2 in
    U.  Raises :class:`CensusGuardError` when n^((2g)^2) exceeds 10^10.
    """
    space = n ** ((2 * g) ** 2)
    if space > CENSUS_GUARD:
        raise CensusGuardError(
            f"census over n^((2g)^2) = {n}^{(2 * g) ** 2} matrices exceeds the 10^10 guard"
        )
    from ._kernels import census_histogram as kernel

    perms, signs = _leibniz(2 * g)
    hist = kernel(g, n, perms, signs, nchunks)
    hist.setflags(write=False)
    return hist


def _det_mod(rows: list[list[int]], n: int) -> int:
    coeffs = _charpoly_integer(rows)
    d = len(rows)
    return (coeffs[-1] * (-1) ** d) % n


def _upper_inverse_mod(T: list[list[int]], n: int) -> list[list[int]]:
    g = len(T)
    inv = [[0] * g for _ in range(g)]
    for j in range(g):
        for i in range(j, -1, -1):
            s = (1 if i == j else 0) - sum(T[i][t] * inv[t][j] for t in range(i + 1, j + 1))
            inv[i][j] = (s * pow(T[i][i], -1, n)) % n
    return inv


@lru_cache(maxsize=None)
def borel_histogram(g: int, n: int) -> np.ndarray:
    """Histogram ``h[mu, char(1) mod n, b]`` over B(n), b in {1, 2}, by parametrization.

    Enumerates (T, mu) with T upper triangular over Z/nZ (unit diagonal
    entries) and mu a unit.  The off-diagonal block T S does not affect
    char(1), so each (T, mu) is weighted by the n^(g(g+1)/2) symmetric S.
    """
    units = [u for u in range(1, n) if gcd(u, n) == 1]
    weight = n ** (g * (g + 1) // 2)
    hist = np.zeros((n, n, 3), dtype=object)
    upper_slots = [(i, j) for i in range(g) for j in range(i + 1, g)]
    d = 2 * g
    for diag in product(units, repeat=g):
        for upper in product(range(n), repeat=len(upper_slots)):
            T = [[0] * g for _ in range(g)]
            for i, t in enumerate(diag):
                T[i][i] = t
            for (i, j), v in zip(upper_slots, upper):
                T[i][j] = v
            Tinv = _upper_inverse_mod(T, n)
            for mu in units:
                D = [[(mu * Tinv[j][i]) % n for j in range(g)] for i in range(g)]
                rows = [[0] * d for _ in range(d)]
                for i in range(g):
                    for j in range(g):
                        rows[i][j] = T[i][j]
                        rows[i + g][j + g] = D[i][j]
                I_minus = [[(int(i == j) - rows[i][j]) for j in range(d)] for i in range(d)]
                c1 = _det_mod(I_minus, n)
                unip = mu == 1 and all(t == 1 for t in diag)
                hist[mu, c1, 2 if unip else 1] += weight
    out = hist.astype(np.int64) if n ** (g * g + 2) < 2**62 else hist
    if isinstance(out, np.ndarray):
        out.setflags(write=False)
    return out


def census(spec: CensusSpec) -> int:
    """Exact cardinality of one class in GSp_2g(Z/nZ)."""
    g, n = spec.g, spec.n
    tag = spec.class_tag
    try:
        h = census_histogram(g, n)
    except CensusGuardError:
        if tag not in ("B", "U", "C_B"):
            raise
        h = borel_histogram(g, n)
    if tag == "G":
        return int(h.sum())
    if tag == "Sp":
        return int(h[1].sum())
    if tag == "B":
        return int(h[:, :, 1:].sum())
    if tag == "U":
        return int(h[:, :, 2].sum())
    if tag == "C":
        return int(h[:, 0, :].sum())
    if tag == "C_B":
        return int(h[:, 0, 1:].sum())
    if tag == "C_coset":
        return int(h[spec.m % n, 0, :].sum())
    # C_prime
    M = spec.M
    hits = [c for c in range(n) if gcd(c % M, M) != 1]
    return int(h[:, hits, :].sum())
