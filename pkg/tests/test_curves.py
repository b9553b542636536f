import json
from itertools import islice

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from koblitz_gsp.arith import build_field, irreducible_polys, primes_up_to
from koblitz_gsp.curves import (
    BadReductionError,
    FieldGuardError,
    FrobeniusRecord,
    HyperellipticCurve,
    SweepCache,
    SweepIOError,
    WeilError,
    builtin_curves,
    count_points,
    discriminant,
    frobenius_charpoly,
    get_curve,
    good_reduction,
    jacobian_order,
    load_curve,
    order_sweep,
    weil_polynomial,
)

from oracles import count_affine_brute, count_points_brute

E = HyperellipticCurve("e", (1, 1, 0, 1))
H = HyperellipticCurve("h", (1, 0, 0, 0, 0, 1))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=4, max_size=9).filter(lambda f: f[-1] != 0))
def test_discriminant_matches_sympy(f):
    x = sympy.symbols("x")
    poly = sum(c * x**i for i, c in enumerate(f))
    assert discriminant(f) == sympy.discriminant(poly, x)


def test_good_reduction_examples():
    assert not good_reduction(H, 5)
    assert not good_reduction(E, 31)
    assert good_reduction(E, 5)
    assert not good_reduction(E, 2)


def test_count_points_examples():
    assert count_points(E, 5) == 9
    assert count_points(E, 7) == 5
    assert count_points(H, 3, 2) == 10
    with pytest.raises(BadReductionError):
        count_points(E, 31)
    with pytest.raises(FieldGuardError):
        count_points(E, 70001, 2)


@pytest.mark.parametrize("label", ["e_x3x1", "e_x3mx1", "g2_x5mx1", "g2_x5x2p1", "C3"])
def test_prime_field_counts_against_enumeration(label):
    c = get_curve(label)
    for p in primes_up_to(80):
        p = int(p)
        if good_reduction(c, p):
            assert count_points(c, p) == count_affine_brute(c.f, p) + 1


@pytest.mark.parametrize(
    "f,p,k",
    [
        ((1, -1, 0, 0, 0, 1), 3, 2),
        ((1, -1, 0, 0, 0, 1), 7, 2),
        ((1, 0, 1, 0, 0, 1), 5, 2),
        ((1, 1, 0, 0, 0, 0, 1), 5, 2),
        ((1, 1, 0, 0, 0, 0, 1), 7, 1),
        ((2, 0, 0, 0, 0, 0, 3), 5, 1),
        ((1, 1, 0, 1), 3, 3),
        ((1, -1, 0, 0, 0, 1), 5, 3),
        ((25039, -33803, -35995, 27231, -27231, 33804, -14085, 1), 5, 3),
    ],
)
def test_extension_counts_against_field_arithmetic(f, p, k):
    c = HyperellipticCurve("t", f)
    assert count_points(c, p, k) == count_points_brute(f, p, k)


def test_field_construction_independence():
    pairs = [(label, p) for label in ("e_x3x1", "g2_x5mx1", "g2_x5x2p1", "C3") for p in (7, 11, 13, 17, 19, 23)]
    checked = 0
    for label, p in pairs:
        c = get_curve(label)
        if not good_reduction(c, p):
            continue
        mods = list(islice(irreducible_polys(p, 2), 0, 40, 13))
        vals = {count_points(c, p, 2, field=build_field(p, 2, m)) for m in mods}
        assert len(vals) == 1
        checked += 1
    assert checked >= 20


def test_weil_polynomial_examples():
    assert weil_polynomial(5, [9]).coefficients == (1, 3, 5)
    assert weil_polynomial(3, [4, 10]).coefficients == (1, 0, 0, 0, 9)
    with pytest.raises(WeilError):
        weil_polynomial(5, [20])


def test_jacobian_order_examples():
    assert jacobian_order(E, 5) == 9
    assert jacobian_order(E, 7) == 5
    assert jacobian_order(H, 3) == 10
    n1, n2 = count_points(H, 3, 1), count_points(H, 3, 2)
    assert (n1 * n1 + n2) // 2 - 3 == 10


def test_genus_one_orders_equal_point_counts():
    for label in ("e_x3x1", "e_x3mx1"):
        c = get_curve(label)
        for p in primes_up_to(200):
            p = int(p)
            if good_reduction(c, p):
                assert jacobian_order(c, p) == count_affine_brute(c.f, p) + 1


def test_genus_three_charpoly_is_palindromic():
    c = get_curve("C3")
    for p in (3, 5, 7, 11, 13):
        if good_reduction(c, p):
            a = frobenius_charpoly(c, p).coefficients
            assert all(a[6 - i] == p ** (3 - i) * a[i] for i in range(4))


def test_builtin_curves():
    curves = builtin_curves()
    c3 = curves["C3"]
    assert c3.genus == 3 and c3.f == (25039, -33803, -35995, 27231, -27231, 33804, -14085, 1)
    assert curves["e_x3x1"].f == (1, 1, 0, 1) and curves["e_x3x1"].genus == 1
    assert sum(c.genus == 1 for c in curves.values()) >= 2
    assert sum(c.genus == 2 and c.degree == 5 for c in curves.values()) >= 2
    with pytest.raises(KeyError):
        get_curve("nope")


def test_curve_validation(tmp_path):
    with pytest.raises(ValueError):
        HyperellipticCurve("sing", (0, 0, 0, 1))
    with pytest.raises(ValueError):
        HyperellipticCurve("low", (1, 1))
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"label": "mine", "genus": 2, "f": [1, -1, 0, 0, 0, 1]}))
    assert load_curve(path).f == (1, -1, 0, 0, 0, 1)
    path.write_text(json.dumps({"label": "mine", "genus": 1, "f": [1, -1, 0, 0, 0, 1]}))
    with pytest.raises(ValueError):
        load_curve(path)


def test_sweep_small_and_resume(tmp_path):
    path = tmp_path / "e.jsonl"
    cache = order_sweep(E, 10, SweepCache.open(path, "e"))
    assert cache.primes() == [3, 5, 7]
    first = path.read_bytes()
    order_sweep(E, 10, SweepCache.open(path, "e"))
    assert path.read_bytes() == first
    cache = SweepCache.open(path, "e")
    order_sweep(E, 20, cache)
    assert cache.primes() == [3, 5, 7, 11, 13, 17, 19]
    assert path.read_bytes().startswith(first)
    line = json.loads(path.read_text().splitlines()[0])
    assert list(line) == ["curve", "p", "counts", "a", "order"]
    assert isinstance(line["order"], str)


def test_sweep_reuses_records(tmp_path, monkeypatch):
    path = tmp_path / "e.jsonl"
    order_sweep(E, 50, SweepCache.open(path, "e"))
    from koblitz_gsp import curves

    seen = []
    real = curves._block_counts

    def spy(curve, ps):
        seen.extend(int(p) for p in ps)
        return real(curve, ps)

    monkeypatch.setattr(curves, "_block_counts", spy)
    order_sweep(E, 70, SweepCache.open(path, "e"))
    assert seen == [53, 59, 61, 67]


def test_sweep_recovers_from_torn_line(tmp_path):
    path = tmp_path / "e.jsonl"
    order_sweep(E, 30, SweepCache.open(path, "e"))
    good = path.read_bytes()
    path.write_bytes(good + b'{"curve":"e","p":3')
    cache = SweepCache.open(path, "e")
    order_sweep(E, 40, cache)
    ref = tmp_path / "ref.jsonl"
    order_sweep(E, 40, SweepCache.open(ref, "e"))
    assert path.read_bytes() == ref.read_bytes()


def test_sweep_io_error_reports_progress(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    cache = SweepCache.open(blocker / "sub" / "e.jsonl", "e")
    with pytest.raises(SweepIOError) as info:
        order_sweep(E, 10, cache)
    assert info.value.last_x == 0


def test_cache_rejects_other_curve(tmp_path):
    path = tmp_path / "e.jsonl"
    order_sweep(E, 10, SweepCache.open(path, "e"))
    with pytest.raises(ValueError):
        SweepCache.open(path, "other")


def test_record_roundtrip_and_checks():
    rec = FrobeniusRecord("h", 3, (4, 10), (0, 0), 10)
    rec.check()
    assert FrobeniusRecord.from_line(rec.to_line()) == rec
    with pytest.raises(WeilError):
        FrobeniusRecord("h", 3, (4, 10), (0, 0), 11).check()


def test_genus_two_sweep_identity(tmp_path):
    c = get_curve("g2_x5x2p1")
    cache = order_sweep(c, 400, SweepCache.in_memory(c.label))
    for r in cache.records:
        n1, n2 = r.counts
        assert r.order == (n1 * n1 + n2) // 2 - r.p
        r.check()
