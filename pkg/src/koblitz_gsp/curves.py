"""Hyperelliptic curves y^2 = f(x) over Q and their reductions mod p.

Point counts over F_{p^k} (k = 1..g) determine the Frobenius characteristic
polynomial through Newton's identities, and its value at 1 is the order of
the Jacobian over F_p.  :class:`SweepCache` stores those orders for every
good prime up to a bound, one JSON object per line, and can be resumed.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .arith import FactoredInteger, FiniteField, _first_irreducible, factorize, is_prime, legendre, primes_up_to
from .symplectic import CharPolyInt

__all__ = [
    "HyperellipticCurve",
    "FrobeniusRecord",
    "SweepCache",
    "BadReductionError",
    "FieldGuardError",
    "WeilError",
    "SweepIOError",
    "discriminant",
    "good_reduction",
    "count_points",
    "frobenius_charpoly",
    "weil_polynomial",
    "jacobian_order",
    "frobenius_record",
    "order_sweep",
    "builtin_curves",
    "get_curve",
    "load_curve",
]

SWEEP_FIELD_GUARD = 2**32
BLOCK = 64


class BadReductionError(ValueError):
    pass


class FieldGuardError(ValueError):
    pass


class WeilError(ValueError):
    """Point counts that no Weil polynomial can produce."""


class SweepIOError(OSError):
    def __init__(self, message: str, last_x: int):
        super().__init__(f"{message} (last durable x = {last_x})")
        self.last_x = last_x


def _bareiss_det(rows: list[list[int]]) -> int:
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _resultant(f: Sequence[int], h: Sequence[int]) -> int:
    # Sylvester matrix with coefficients highest degree first
    m, n = len(f) - 1, len(h) - 1
    fh, hh = list(reversed(f)), list(reversed(h))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + fh + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + hh + [0] * (size - n - 1 - i))
    return _bareiss_det(rows)


def discriminant(f: Sequence[int]) -> int:
    """Discriminant of f (coefficients low degree first), exact."""
    d = len(f) - 1
    deriv = [i * f[i] for i in range(1, d + 1)]
    res = _resultant(f, deriv)
    q, r = divmod(res, f[-1])
    assert r == 0
    return (-1) ** (d * (d - 1) // 2) * q


@dataclass(frozen=True)
class HyperellipticCurve:
    label: str
    f: tuple[int, ...]

    def __post_init__(self):
        f = tuple(int(c) for c in self.f)
        while len(f) > 1 and f[-1] == 0:
            f = f[:-1]
        object.__setattr__(self, "f", f)
        if self.degree not in range(3, 9):
            raise ValueError(f"deg f = {self.degree}; expected 3..8 (genus 1..3)")
        if self.disc == 0:
            raise ValueError(f"f has a repeated root; {self.label!r} is singular")

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def genus(self) -> int:
        return (self.degree - 1) // 2

    @property
    def leading(self) -> int:
        return self.f[-1]

    @cached_property
    def disc(self) -> int:
        return discriminant(self.f)

    def to_json(self) -> dict:
        return {"label": self.label, "genus": self.genus, "f": list(self.f)}

    @classmethod
    def from_json(cls, obj: dict) -> "HyperellipticCurve":
        try:
            curve = cls(str(obj["label"]), tuple(int(c) for c in obj["f"]))
        except KeyError as exc:
            raise ValueError(f"curve object lacks field {exc}") from None
        if "genus" in obj and int(obj["genus"]) != curve.genus:
            raise ValueError(f"declared genus {obj['genus']} does not match deg f = {curve.degree}")
        return curve


def good_reduction(curve: HyperellipticCurve, p: int) -> bool:
    return p % 2 == 1 and curve.leading % p != 0 and curve.disc % p != 0


def _mod_array(modulus: Sequence[int], k: int) -> np.ndarray:
    return np.asarray(modulus[:k], dtype=np.int64)


def _points_at_infinity(curve: HyperellipticCurve, p: int, k: int) -> int:
    if curve.degree % 2 == 1:
        return 1
    # every element of F_p is a square in F_{p^k} for even k
    if k % 2 == 0 or legendre(curve.leading, p) == 1:
        return 2
    return 0


def count_points(
    curve: HyperellipticCurve,
    p: int,
    k: int = 1,
    field: Optional[FiniteField] = None,
    max_field: int = SWEEP_FIELD_GUARD,
) -> int:
    """Projective points of the smooth model over F_{p^k}."""
    if not is_prime(p) or not good_reduction(curve, p):
        raise BadReductionError(f"{curve.label} has no good odd-degree-model reduction at p={p}")
    if not 1 <= k <= 3:
        raise ValueError("k must be 1, 2 or 3")
    if p**k > max_field:
        raise FieldGuardError(f"p^k = {p}^{k} exceeds the field guard {max_field}")
    if field is not None:
        if (field.p, field.k) != (p, k):
            raise ValueError("field does not match (p, k)")
        modulus = field.modulus
    else:
        modulus = (0, 1) if k == 1 else _first_irreducible(p, k)
    s = _kernels.character_sum(np.asarray(curve.f, dtype=np.int64), p, k, _mod_array(modulus, k))
    return p**k + int(s) + _points_at_infinity(curve, p, k)


def weil_polynomial(p: int, counts: Sequence[int]) -> CharPolyInt:
    """Frobenius characteristic polynomial from N_1..N_g.

    Raises :class:`WeilError` if the counts do not come from a polynomial
    whose roots all have absolute value sqrt(p).
    """
    g = len(counts)
    s = [p**k + 1 - n for k, n in enumerate(counts, start=1)]
    e = [1]
    for k in range(1, g + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * s[i - 1] for i in range(1, k + 1))
        if acc % k:
            raise WeilError(f"counts {list(counts)} at p={p} give a non-integral coefficient")
        e.append(acc // k)
    a = [(-1) ** i * e[i] for i in range(g + 1)]
    full = a + [p ** (g - i) * a[i] for i in range(g - 1, -1, -1)]
    poly = CharPolyInt(g, tuple(full))
    roots = np.roots(np.array(full, dtype=float))
    rel = np.abs(np.abs(roots) / math.sqrt(p) - 1.0)
    if rel.max() > 1e-6:
        raise WeilError(f"counts {list(counts)} at p={p}: eigenvalue off the circle |z| = sqrt(p) by {rel.max():.3g}")
    return poly


def frobenius_charpoly(curve: HyperellipticCurve, p: int) -> CharPolyInt:
    counts = [count_points(curve, p, k) for k in range(1, curve.genus + 1)]
    return weil_polynomial(p, counts)


def jacobian_order(curve: HyperellipticCurve, p: int) -> int:
    return frobenius_charpoly(curve, p).at_one()


def weil_interval(g: int, p: int) -> tuple[float, float]:
    r = math.sqrt(p)
    return (r - 1) ** (2 * g), (r + 1) ** (2 * g)


@dataclass(frozen=True)
class FrobeniusRecord:
    curve: str
    p: int
    counts: tuple[int, ...]
    a: tuple[int, ...]
    order: int

    @property
    def genus(self) -> int:
        return len(self.counts)

    @cached_property
    def factored(self) -> FactoredInteger:
        return factorize(self.order)

    def charpoly(self) -> CharPolyInt:
        g = self.genus
        a = (1,) + self.a
        return CharPolyInt(g, a + tuple(self.p ** (g - i) * a[i] for i in range(g - 1, -1, -1)))

    def check(self) -> None:
        """Weil interval and the palindromic coefficient relation."""
        lo, hi = weil_interval(self.genus, self.p)
        if not (lo * (1 - 1e-12) <= self.order <= hi * (1 + 1e-12)):
            raise WeilError(f"order {self.order} at p={self.p} outside [{lo}, {hi}]")
        poly = self.charpoly()
        c = poly.coefficients
        g = self.genus
        if any(c[2 * g - i] != self.p ** (g - i) * c[i] for i in range(g + 1)):
            raise WeilError(f"non-palindromic Frobenius polynomial at p={self.p}")
        if poly.at_one() != self.order or self.order >= 2**127:
            raise WeilError(f"inconsistent order at p={self.p}")

    def to_line(self) -> str:
        obj = {
            "curve": self.curve,
            "p": self.p,
            "counts": list(self.counts),
            "a": list(self.a),
            "order": str(self.order),
        }
        return json.dumps(obj, separators=(",", ":")) + "\n"

    @classmethod
    def from_line(cls, line: str) -> "FrobeniusRecord":
        obj = json.loads(line)
        return cls(obj["curve"], int(obj["p"]), tuple(obj["counts"]), tuple(obj["a"]), int(obj["order"]))


def frobenius_record(curve: HyperellipticCurve, p: int, counts: Sequence[int]) -> FrobeniusRecord:
    poly = weil_polynomial(p, counts)
    rec = FrobeniusRecord(curve.label, p, tuple(int(n) for n in counts), poly.a[: curve.genus], poly.at_one())
    rec.check()
    return rec


@dataclass
class SweepCache:
    """Frobenius records of one curve, persisted as JSON lines sorted by p.

    ``x_max`` lives in a small sidecar file next to the record file so that a
    resumed sweep knows which range is already complete.
    """

    path: Optional[Path]
    curve: str
    x_max: int = 0
    records: list[FrobeniusRecord] = field(default_factory=list)

    @property
    def meta_path(self) -> Optional[Path]:
        return None if self.path is None else self.path.with_name(self.path.name + ".meta")

    @classmethod
    def in_memory(cls, curve: str, records: Iterable[FrobeniusRecord] = (), x_max: Optional[int] = None) -> "SweepCache":
        recs = sorted(records, key=lambda r: r.p)
        reach = x_max if x_max is not None else (recs[-1].p if recs else 0)
        return cls(None, curve, reach, recs)

    @classmethod
    def open(cls, path: str | os.PathLike, curve: str) -> "SweepCache":
        path = Path(path)
        cache = cls(path, curve)
        if path.exists():
            raw = path.read_text(encoding="utf-8")
            lines = raw.split("\n")
            if lines and lines[-1] != "":
                # a torn final line from an interrupted write; the sweep recomputes it
                lines = lines[:-1]
            for line in lines:
                if not line:
                    continue
                rec = FrobeniusRecord.from_line(line)
                if rec.curve != curve:
                    raise ValueError(f"cache {path} belongs to curve {rec.curve!r}, not {curve!r}")
                cache.records.append(rec)
            ps = [r.p for r in cache.records]
            if ps != sorted(set(ps)):
                raise ValueError(f"cache {path} is not strictly sorted by p")
        meta = cache.meta_path
        if meta is not None and meta.exists():
            info = json.loads(meta.read_text(encoding="utf-8"))
            if info.get("curve") != curve:
                raise ValueError(f"cache metadata {meta} belongs to another curve")
            cache.x_max = int(info["x_max"])
        return cache

    @classmethod
    def read(cls, path: str | os.PathLike) -> "SweepCache":
        """Open an existing cache, taking the curve label from its contents."""
        path = Path(path)
        meta = path.with_name(path.name + ".meta")
        if meta.exists():
            label = json.loads(meta.read_text(encoding="utf-8"))["curve"]
        elif path.exists():
            with open(path, encoding="utf-8") as fh:
                first = fh.readline()
            if not first.strip():
                raise ValueError(f"cache {path} is empty")
            label = json.loads(first)["curve"]
        else:
            raise FileNotFoundError(f"no sweep cache at {path}")
        return cls.open(path, label)

    def primes(self) -> list[int]:
        return [r.p for r in self.records]

    def orders(self, x: Optional[float] = None) -> list[int]:
        return [r.order for r in self.records if x is None or r.p <= x]

    def __len__(self) -> int:
        return len(self.records)

    def _rewrite_records(self) -> None:
        tmp = self.path.with_name(self.path.name + ".tmp")
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.writelines(r.to_line() for r in self.records)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.path)

    def _write_meta(self) -> None:
        meta = self.meta_path
        tmp = meta.with_name(meta.name + ".tmp")
        tmp.write_text(json.dumps({"curve": self.curve, "x_max": self.x_max}) + "\n", encoding="utf-8")
        os.replace(tmp, meta)

    def extend(self, new: Sequence[FrobeniusRecord], reached: int) -> None:
        """Append a block of records (all beyond the current ones) and advance x_max."""
        if new and self.records and new[0].p <= self.records[-1].p:
            raise ValueError("records must be appended in increasing order of p")
        if self.path is not None:
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                if self.path.exists() and self.path.stat().st_size != sum(len(r.to_line().encode()) for r in self.records):
                    self._rewrite_records()
                with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
                    fh.writelines(r.to_line() for r in new)
                    fh.flush()
                    os.fsync(fh.fileno())
                self.records.extend(new)
                self.x_max = max(self.x_max, reached)
                self._write_meta()
            except OSError as exc:
                raise SweepIOError(f"writing {self.path} failed: {exc.strerror or exc}", self.x_max) from exc
        else:
            self.records.extend(new)
            self.x_max = max(self.x_max, reached)


def _block_counts(curve: HyperellipticCurve, ps: np.ndarray) -> np.ndarray:
    fc = np.asarray(curve.f, dtype=np.int64)
    g = curve.genus
    counts = np.zeros((ps.size, g), dtype=object)
    for k in range(1, g + 1):
        if k == 1:
            mods = np.zeros((ps.size, 1), dtype=np.int64)
        else:
            mods = np.array([_first_irreducible(int(p), k)[:k] for p in ps], dtype=np.int64)
        sums = _kernels.character_sums(fc, ps, k, mods)
        for i, p in enumerate(ps):
            p = int(p)
            counts[i, k - 1] = p**k + int(sums[i]) + _points_at_infinity(curve, p, k)
    return counts


def order_sweep(
    curve: HyperellipticCurve,
    x_max: int,
    cache: SweepCache,
    max_field: int = SWEEP_FIELD_GUARD,
    progress=None,
) -> SweepCache:
    """Fill ``cache`` with a record for every good prime p <= x_max.

    Primes already present are skipped, blocks of 64 primes are counted in
    parallel and appended in order, so an interrupted sweep resumes cleanly.
    """
    if x_max < 3:
        raise ValueError("x_max must be at least 3")
    if cache.curve != curve.label:
        raise ValueError(f"cache belongs to {cache.curve!r}, not {curve.label!r}")
    g = curve.genus
    done = set(cache.primes())
    todo = [
        int(p)
        for p in primes_up_to(x_max)
        if p > cache.x_max and int(p) not in done and good_reduction(curve, int(p))
    ]
    if todo and todo[-1] ** g > max_field:
        raise FieldGuardError(f"p^g = {todo[-1]}^{g} exceeds the field guard {max_field}")
    for start in range(0, len(todo), BLOCK):
        block = np.array(todo[start : start + BLOCK], dtype=np.int64)
        counts = _block_counts(curve, block)
        recs = [frobenius_record(curve, int(p), list(counts[i])) for i, p in enumerate(block)]
        last = start + BLOCK >= len(todo)
        cache.extend(recs, x_max if last else int(block[-1]))
        if progress is not None:
            progress(int(block[-1]))
    if cache.x_max < x_max:
        cache.extend([], x_max)
    return cache


_BUILTIN = {
    # genus 1
    "e_x3x1": (1, 1, 0, 1),
    "e_x3mx1": (1, -1, 0, 1),
    # genus 2, odd-degree models; both quintics have Galois group S5
    "g2_x5mx1": (1, -1, 0, 0, 0, 1),
    "g2_x5x2p1": (1, 0, 1, 0, 0, 1),
    # genus 2 with CM by Q(zeta_5): handy for hand-checkable counts
    "g2_x5p1": (1, 0, 0, 0, 0, 1),
    # genus 3
    "C3": (25039, -33803, -35995, 27231, -27231, 33804, -14085, 1),
}


def builtin_curves() -> dict[str, HyperellipticCurve]:
    return {label: HyperellipticCurve(label, f) for label, f in _BUILTIN.items()}


def get_curve(label: str) -> HyperellipticCurve:
    try:
        return HyperellipticCurve(label, _BUILTIN[label])
    except KeyError:
        raise KeyError(f"unknown curve label {label!r}; built-in: {', '.join(_BUILTIN)}") from None


def load_curve(spec: str | os.PathLike) -> HyperellipticCurve:
    """A built-in label or a path to a JSON file {"label", "genus", "f"}."""
    if str(spec) in _BUILTIN:
        return get_curve(str(spec))
    path = Path(spec)
    if not path.exists():
        raise KeyError(f"{spec!r} is neither a built-in curve label nor an existing file")
    return HyperellipticCurve.from_json(json.loads(path.read_text(encoding="utf-8")))
