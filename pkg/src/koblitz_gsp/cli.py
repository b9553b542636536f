"""Command line interface: ``koblitz-gsp <group> <command> [flags]``.

Exit status is 0 on success, 1 when a computation fails and 2 for usage
errors.  Reals are printed with 15 significant digits and fractions as
``num/den``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import curves, densities, lmfdb, sieve, stats, symplectic
from .stats import format_real

CACHE_ENV = "KOBLITZ_GSP_CACHE_DIR"


class UsageError(Exception):
    pass


def _frac(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def _cache_path(flag: Optional[str], label: str) -> Path:
    if flag:
        return Path(flag)
    root = os.environ.get(CACHE_ENV)
    if not root:
        raise UsageError(f"--cache not given and {CACHE_ENV} is unset")
    return Path(root) / f"{label}.jsonl"


def _open_cache(flag: Optional[str], label: Optional[str] = None) -> curves.SweepCache:
    if flag is None and label is None:
        raise UsageError("--cache is required")
    path = _cache_path(flag, label or "")
    return curves.SweepCache.read(path)


def _out(args) -> tuple:
    if getattr(args, "out", None):
        return open(args.out, "w", encoding="utf-8", newline="\n"), True
    return sys.stdout, False


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

def cmd_group_order(args) -> None:
    print(symplectic.group_order_closed(args.g, args.l, args.k))


def cmd_group_census(args) -> None:
    spec = symplectic.CensusSpec(args.g, args.n, args.cls, m=args.m, M=args.M)
    print(symplectic.census(spec))


def cmd_density_lambda(args) -> None:
    print(_frac(densities.lambda_l(args.g, args.l)))


def cmd_density_euler(args) -> None:
    print(format_real(densities.universal_constant(args.g, args.cutoff_exp).value))


def cmd_density_koblitz(args) -> None:
    data = densities.ExceptionalData(args.m, args.mass)
    print(format_real(densities.koblitz_constant(args.g, data, args.cutoff_exp)))


def cmd_curve_sweep(args) -> None:
    curve = curves.load_curve(args.curve)
    path = _cache_path(args.cache, curve.label)
    cache = curves.SweepCache.open(path, curve.label)
    before = len(cache)
    curves.order_sweep(curve, args.x_max, cache)
    print(f"curve={curve.label} records={len(cache)} new={len(cache) - before} x_max={cache.x_max}")


def cmd_curve_fetch(args) -> None:
    rec = lmfdb.fetch_lmfdb(args.label)
    text = json.dumps({"label": rec.label, "genus": rec.genus, "f": list(rec.f)}) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_stats_koblitz(args) -> None:
    cache = _open_cache(args.cache)
    grid = args.x if args.x else _default_grid(cache.x_max)
    series = stats.koblitz_ratio(cache, grid, args.constant)
    fh, close = _out(args)
    try:
        stats.write_ratio_csv(series, fh)
    finally:
        if close:
            fh.close()


def _default_grid(x_max: int, points: int = 20) -> list[int]:
    if x_max < 3:
        raise ValueError("cache covers no primes")
    grid = sorted({max(3, round(3 * (x_max / 3) ** (i / (points - 1)))) for i in range(points)})
    return [x for x in grid if x <= x_max]


def cmd_stats_ek(args) -> None:
    cache = _open_cache(args.cache)
    grid = args.gamma if args.gamma else [i / 4 for i in range(-12, 13)]
    cdf = stats.erdos_kac_cdf(cache, grid)
    fh, close = _out(args)
    try:
        stats.write_ek_csv(cdf, fh)
    finally:
        if close:
            fh.close()


def cmd_stats_chebotarev(args) -> None:
    cache = _open_cache(args.cache)
    reports = [stats.chebotarev_density(cache, d, args.g) for d in args.d]
    fh, close = _out(args)
    try:
        stats.write_chebotarev_csv(reports, fh)
    finally:
        if close:
            fh.close()


def cmd_stats_almost_prime(args) -> None:
    cache = _open_cache(args.cache)
    x = args.x if args.x is not None else float("inf")
    print(stats.almost_prime_count(cache, args.r, x))


def cmd_sieve_params(args) -> None:
    p = sieve.optimal_params(args.g, args.theta, args.epsilon, args.double_B)
    print(f"r={p.r}")
    print(f"xi={format_real(p.xi)}")
    print(f"U={format_real(p.U)}")
    print(f"V={format_real(p.V)}")
    print(f"B={format_real(p.B)}")
    print(f"J={format_real(sieve.J_value(p.U, p.V))}")
    print(f"theta_star={_frac(sieve.theta_star(args.g))}")
    print(f"selberg_coeff={format_real(sieve.selberg_upper_coeff(args.g, args.theta))}")
    v = p.violations()
    print("violations=" + ("none" if not v else "; ".join(v)))


def cmd_sieve_check(args) -> None:
    cache = _open_cache(args.cache)
    params = sieve.optimal_params(args.g, args.theta, args.epsilon)
    x = args.x if args.x is not None else cache.x_max
    rep = sieve.almost_prime_lower_bound_check(cache.orders(x), params, x)
    print(f"x={x}")
    print(f"lhs={rep.lhs}")
    print(f"H={format_real(rep.H)}")
    print(f"correction={rep.correction}")
    print(f"holds={'true' if rep.holds else 'false'}")
    if not rep.holds:
        raise RuntimeError("the almost-prime lower bound failed on this cache")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: usage error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="koblitz-gsp", description="Jacobian orders, symplectic densities and sieve constants.")
    groups = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    grp = groups.add_parser("group", help="GSp_2g orders and censuses").add_subparsers(dest="cmd", required=True)
    p = grp.add_parser("order", help="closed-form #GSp_2g(Z/l^k)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_group_order)
    p = grp.add_parser("census", help="exhaustive class count in GSp_2g(Z/n)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", required=True, choices=symplectic.CLASS_TAGS)
    p.add_argument("--m", type=int, help="multiplicator for C_coset")
    p.add_argument("--M", type=int, help="modulus for C_prime")
    p.set_defaults(func=cmd_group_census)

    den = groups.add_parser("density", help="exact densities and Euler products").add_subparsers(dest="cmd", required=True)
    p = den.add_parser("lambda", help="#C(l)/#G(l) as a fraction")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_density_lambda)
    p = den.add_parser("euler", help="universal constant over primes l < 2^n")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--cutoff-exp", type=int, required=True)
    p.set_defaults(func=cmd_density_euler)
    p = den.add_parser("koblitz", help="Koblitz constant from exceptional data")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--m", type=int, required=True, help="squarefree exceptional modulus M")
    p.add_argument("--mass", type=_fraction_arg, required=True, help="1 - #C'(M)/#G(M), e.g. 19/45")
    p.add_argument("--cutoff-exp", type=int, default=24)
    p.set_defaults(func=cmd_density_koblitz)

    cur = groups.add_parser("curve", help="point counts and sweeps").add_subparsers(dest="cmd", required=True)
    p = cur.add_parser("sweep", help="Jacobian orders for all good p <= x-max")
    p.add_argument("--curve", required=True, help="built-in label or curve JSON file")
    p.add_argument("--x-max", type=int, required=True)
    p.add_argument("--cache", help=f"cache file (default ${CACHE_ENV}/<label>.jsonl)")
    p.set_defaults(func=cmd_curve_sweep)
    p = cur.add_parser("fetch", help="genus-2 curve from the LMFDB")
    p.add_argument("--label", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_curve_fetch)

    st = groups.add_parser("stats", help="statistics over a sweep cache").add_subparsers(dest="cmd", required=True)
    p = st.add_parser("koblitz", help="prime-order ratio series")
    p.add_argument("--cache", required=True)
    p.add_argument("--x", type=_int_list, help="comma-separated x grid")
    p.add_argument("--constant", type=float, help="reference constant C_A")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats_koblitz)
    p = st.add_parser("erdos-kac", help="normalized omega(order) CDF")
    p.add_argument("--cache", required=True)
    p.add_argument("--gamma", type=_float_list, help="comma-separated grid")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats_ek)
    p = st.add_parser("chebotarev", help="observed d | order frequencies")
    p.add_argument("--cache", required=True)
    p.add_argument("--d", type=_int_list, required=True)
    p.add_argument("--g", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats_chebotarev)
    p = st.add_parser("almost-prime", help="#{p <= x : Omega(order) <= r}")
    p.add_argument("--cache", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--x", type=int)
    p.set_defaults(func=cmd_stats_almost_prime)

    sv = groups.add_parser("sieve", help="sieve constants").add_subparsers(dest="cmd", required=True)
    p = sv.add_parser("params", help="optimal parameters for (g, theta)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--theta", type=_fraction_arg, required=True)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--double-B", action="store_true", help="include the factor 2 of the sieve prefactor in B")
    p.set_defaults(func=cmd_sieve_params)
    p = sv.add_parser("check", help="almost-prime lower bound on a cache")
    p.add_argument("--cache", required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--theta", type=_fraction_arg, required=True)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--x", type=int)
    p.set_defaults(func=cmd_sieve_check)

    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, lmfdb.MalformedLabelError) as exc:
        print(f"koblitz-gsp: usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, ArithmeticError, OSError, RuntimeError, lmfdb.LmfdbError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"koblitz-gsp: error: {msg}", file=sys.stderr)
        return 1
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
