"""Command-line front end: ``polydiam <subcommand> ...``.

Exit codes: 0 success, 1 a bound/identity violation was detected, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import bounds as bounds_mod
from . import cayley, charsum
from .dlog import DEFAULT_MAX_ORDER
from .errors import PolydiamError, ResourceError
from .ff_core import FieldContext, FieldParams, FqPoly
from .poly_enum import DEFAULT_ENUM_CAP, build_catalog

log = logging.getLogger("polydiam")

REPORT_COLUMNS = [
    "q", "n", "d", "f", "status", "connected", "diameter", "distinct_generators", "regularity",
    "bound_lwwz", "bound_thm1", "bound_thm2", "max_weil_ratio", "moment_pass", "theta", "runtime_ms",
]


class UsageError(Exception):
    pass


class _Once(argparse.Action):
    """Store action that rejects a flag given twice."""

    def __call__(self, parser, namespace, values, option_string=None):
        seen = getattr(namespace, "_seen", set())
        if self.dest in seen:
            parser.error(f"{option_string} given more than once")
        seen.add(self.dest)
        namespace._seen = seen
        setattr(namespace, self.dest, values)


class _OnceFlag(_Once):
    def __init__(self, option_strings, dest, **kwargs):
        kwargs.setdefault("default", False)
        super().__init__(option_strings, dest, nargs=0, **kwargs)

    def __call__(self, parser, namespace, values, option_string=None):
        super().__call__(parser, namespace, True, option_string)


def _int_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


# ---------------------------------------------------------------- formatting


def _fmt_csv(value):
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(round(value, 10))
    return str(value)


def write_rows(rows: list[dict], fmt: str, columns: list[str], out) -> None:
    if fmt == "json":
        json.dump([{c: r.get(c) for c in columns} for r in rows], out, indent=2)
        out.write("\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt_csv(r.get(c)) for c in columns])


def _emit(payload, fmt: str, out_path: str | None):
    buf = io.StringIO()
    if isinstance(payload, list):
        columns = list(payload[0].keys()) if payload else []
        write_rows(payload, fmt, columns, buf)
    elif fmt == "json":
        json.dump(payload, buf, indent=2, default=str)
        buf.write("\n")
    else:
        write_rows([payload], "csv", list(payload.keys()), buf)
    text = buf.getvalue()
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _floor(x):
    return None if x is None else math.floor(x)


# ---------------------------------------------------------------- cells


@dataclass(frozen=True)
class Cell:
    q: int
    n: int
    d: int
    modulus: str | None = None
    base_modulus: str | None = None
    max_order: int = DEFAULT_MAX_ORDER
    charsums: bool = True
    timing: bool = False


def run_cell(cell: Cell) -> dict:
    """One ReportRow; never raises for caps, marks the row skipped instead."""
    start = time.perf_counter()
    row = {c: None for c in REPORT_COLUMNS}
    row.update(q=cell.q, n=cell.n, d=cell.d, status="ok")
    rep = bounds_mod.evaluate_bounds(cell.q, cell.n, cell.d)
    row.update(bound_lwwz=rep.bound_lwwz, bound_thm1=rep.bound_thm1, bound_thm2=rep.bound_thm2, theta=rep.theta)
    try:
        ctx = FieldContext.create(cell.q, cell.n, cell.modulus, cell.base_modulus)
        row["f"] = ctx.modulus.to_string()
        report = bounds_mod.compare(ctx, cell.d, run_bfs=True, max_order=cell.max_order)
        row.update(
            connected=report.connected, diameter=report.exact_diameter,
            distinct_generators=report.distinct_generators, regularity=report.regularity,
        )
        row["violation"] = report.violated
        if cell.charsums and ctx.order <= charsum.WEIL_MAX_ORDER:
            row["max_weil_ratio"] = charsum.verify_weil(ctx, cell.d).ratio
        if cell.charsums and ctx.order <= charsum.MOMENT_MAX_ORDER:
            catalog = build_catalog(ctx.params, cell.d)
            m = charsum.moment_exponent(ctx.n, cell.d)
            if catalog.num_irreducibles ** (2 * m) <= 10**8:
                row["moment_pass"] = charsum.verify_moment(ctx, cell.d, catalog=catalog).passed
    except ResourceError as exc:
        row["status"] = "skipped"
        log.warning("cell q=%d n=%d d=%d skipped: %s", cell.q, cell.n, cell.d, exc)
    if cell.timing:
        row["runtime_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return row


def row_is_violation(row: dict) -> bool:
    if row.get("violation"):
        return True
    if row.get("max_weil_ratio") is not None and row["max_weil_ratio"] > 1 + charsum.FLOAT_RTOL:
        return True
    return row.get("moment_pass") is False


def sweep_cells(q_list, n_range, d_range, **kwargs) -> list[Cell]:
    return [Cell(q, n, d, **kwargs) for q in q_list for n in n_range for d in d_range if 1 <= d < n]


def run_sweep(cells: list[Cell], jobs: int) -> list[dict]:
    if jobs <= 1 or len(cells) <= 1:
        return [run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_cell, cells))  # map keeps cell order


# ---------------------------------------------------------------- subcommands


def cmd_enumerate(args) -> int:
    params = FieldParams.from_q(args.q, FqPoly.parse(args.base_modulus).coeffs if args.base_modulus else None)
    catalog = build_catalog(params, args.d, args.max_enum)
    if args.prime_powers:
        rows = [
            {"poly": w.poly.to_string(), "base": w.base.to_string(), "k": w.k, "lambda": w.lam}
            for w in catalog.prime_powers
        ]
        columns = ["poly", "base", "k", "lambda"]
    else:
        rows = [{"poly": h.to_string()} for h in catalog.irreducibles]
        columns = ["poly"]
    buf = io.StringIO()
    write_rows(rows, args.format, columns, buf)
    _write(buf.getvalue(), args.out)
    return 0


def _write(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ctx(args) -> FieldContext:
    return FieldContext.create(args.q, args.n, args.modulus, args.base_modulus)


def cmd_diameter(args) -> int:
    ctx = _ctx(args)
    gens = cayley.build_generators(ctx, args.d)
    res = cayley.bfs_from_identity(gens, ctx, max_order=args.max_order)
    other = cayley.bfs_from_identity(gens, ctx, convention="div", max_order=args.max_order)
    payload = res.to_dict()
    payload["conventions_agree"] = other.diameter == res.diameter and other.connected == res.connected
    if args.format == "csv":
        payload = {k: v for k, v in payload.items() if k != "distance_histogram"} | {
            "distance_histogram": ";".join(f"{k}:{v}" for k, v in sorted(res.histogram.items())),
            "eccentric_vertex": ",".join(map(str, payload["eccentric_vertex"] or [])) or None,
            "witness": ",".join(map(str, payload["witness"] or [])) or None,
        }
    _emit(payload, args.format, args.out)
    return 0 if payload["conventions_agree"] else 1


def cmd_bounds(args) -> int:
    if args.with_bfs:
        ctx = _ctx(args)
        report = bounds_mod.compare(ctx, args.d, run_bfs=True, max_order=args.max_order)
    else:
        report = bounds_mod.evaluate_bounds(args.q, args.n, args.d)
    payload = report.to_dict()
    if not args.timing:
        payload["runtime_ms"] = None
    for name in ("bound_lwwz", "bound_thm1", "bound_thm2"):
        payload[name + "_floor"] = _floor(payload[name])
    if args.format == "csv":
        payload["katz_cohen"] = json.dumps(payload["katz_cohen"], sort_keys=True)
        payload["flags"] = json.dumps(payload["flags"], sort_keys=True) if payload["flags"] else None
    _emit(payload, args.format, args.out)
    return 1 if report.violated else 0


def cmd_charsums(args) -> int:
    ctx = _ctx(args)
    if args.check == "weil":
        rep = charsum.verify_weil(ctx, args.d)
        payload, ok = rep.to_dict(), rep.passed
    elif args.check == "moment":
        rep = charsum.verify_moment(ctx, args.d, exact=args.exact)
        payload, ok = rep.to_dict(), rep.passed
    else:
        dlog = charsum.build_dlog(ctx, args.max_order)
        if args.check == "orthogonality":
            resid = charsum.orthogonality_residual(ctx, dlog)
            tol = 1e-6 * ctx.order
            payload = {"check": "orthogonality", "q": ctx.q, "n": ctx.n, "max_residual": resid, "tolerance": tol}
            ok = resid <= tol
        else:
            gens = cayley.build_generators(ctx, args.d)
            eig = charsum.cayley_spectrum(gens, dlog, ctx)
            mags = abs(eig[1:])
            payload = {
                "check": "spectrum", "q": ctx.q, "n": ctx.n, "d": args.d,
                "lambda_0": float(eig[0].real), "regularity": gens.regularity,
                "max_nontrivial_abs": float(mags.max()) if mags.size else 0.0,
            }
            ok = abs(eig[0] - gens.regularity) <= 1e-6 * gens.regularity
        payload["passed"] = bool(ok)
    payload["f"] = ctx.modulus.to_string()
    _emit(payload, args.format, args.out)
    return 0 if ok else 1


def cmd_repcount(args) -> int:
    ctx = _ctx(args)
    if args.weighted:
        catalog = build_catalog(ctx.params, args.d)
        vec = charsum.rep_count_Mk(ctx, args.d, args.k, max_order=args.max_order, catalog=catalog)
        bound_sq = charsum.mk_deviation_bound_squared(ctx.q, ctx.n, args.d, args.k, catalog.num_irreducibles)
    else:
        if args.d != 1:
            raise UsageError("unweighted counts are the d = 1 linear form; pass --d 1 or --weighted")
        vec = charsum.rep_count_Nk(ctx, args.k, max_order=args.max_order)
        bound_sq = charsum.nk_deviation_bound_squared(ctx.q, ctx.n, args.k) if args.k >= 2 * (ctx.n - 1) else None
    payload = vec.summary()
    payload.update(q=ctx.q, n=ctx.n, d=args.d, f=ctx.modulus.to_string())
    payload["total_matches"] = vec.total == vec.expected_total
    payload["deviation_within_bound"] = vec.max_deviation_ok(bound_sq) if bound_sq is not None else None
    payload["max_deviation"] = vec.max_deviation()
    payload["deviation_bound"] = math.sqrt(bound_sq) if bound_sq is not None else None
    for key in ("total", "expected_total", "min", "max"):
        payload[key] = str(payload[key]) if payload[key] >= 2**53 else payload[key]
    _emit(payload, args.format, args.out)
    ok = payload["total_matches"] and payload["deviation_within_bound"] is not False
    return 0 if ok else 1


def cmd_sweep(args) -> int:
    cells = sweep_cells(
        args.q_list, args.n_range, args.d_range, max_order=args.max_order, charsums=not args.no_charsums,
        timing=args.timing, base_modulus=None,
    )
    rows = run_sweep(cells, args.jobs)
    buf = io.StringIO()
    write_rows(rows, args.format, REPORT_COLUMNS, buf)
    _write(buf.getvalue(), args.out)
    bad = [r for r in rows if row_is_violation(r)]
    for r in bad:
        log.error("violation at q=%s n=%s d=%s", r["q"], r["n"], r["d"])
    return 1 if bad else 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return run_selftest(quick=args.quick, stream=sys.stdout)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polydiam", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def field_args(p, need_n=True, need_d=True):
        p.add_argument("--q", type=_positive, required=True, action=_Once, help="base field size, a prime power")
        if need_n:
            p.add_argument("--n", type=_positive, required=True, action=_Once, help="extension degree")
            p.add_argument("--modulus", action=_Once, help="degree-n monic irreducible f, e.g. 1,1,0,1")
        if need_d:
            p.add_argument("--d", type=_positive, required=True, action=_Once, help="generator degree")
        p.add_argument("--base-modulus", action=_Once, help="degree-s modulus over F_p when q = p^s, s > 1")
        p.add_argument("--max-order", type=_positive, default=DEFAULT_MAX_ORDER, action=_Once,
                       help="cap on q^n - 1 (env POLYDIAM_MAX_ORDER)")
        p.add_argument("--format", choices=["csv", "json"], default="json", action=_Once)
        p.add_argument("--out", action=_Once, help="output file (default stdout)")

    p = sub.add_parser("enumerate", help="list I_d or P_d")
    field_args(p, need_n=False)
    p.add_argument("--s", type=_positive, action=_Once, help="accepted for symmetry; s is read off q")
    p.add_argument("--prime-powers", action=_OnceFlag)
    p.add_argument("--max-enum", type=_positive, default=DEFAULT_ENUM_CAP, action=_Once)
    p.set_defaults(func=cmd_enumerate, format="csv")

    p = sub.add_parser("diameter", help="exact diameter by BFS")
    field_args(p)
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("bounds", help="closed-form bounds, optionally with the exact diameter")
    field_args(p)
    p.add_argument("--with-bfs", action=_OnceFlag)
    p.add_argument("--timing", action=_OnceFlag, help="fill runtime_ms (breaks byte-identical output)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("charsums", help="character-sum checks")
    field_args(p)
    p.add_argument("--check", choices=["weil", "moment", "orthogonality", "spectrum"], required=True, action=_Once)
    p.add_argument("--exact", action=_OnceFlag)
    p.set_defaults(func=cmd_charsums)

    p = sub.add_parser("repcount", help="representation counters M_k / N_k")
    field_args(p)
    p.add_argument("--k", type=_positive, required=True, action=_Once)
    p.add_argument("--weighted", action=_OnceFlag)
    p.set_defaults(func=cmd_repcount)

    p = sub.add_parser("sweep", help="one report row per (q, n, d) cell")
    p.add_argument("--q-list", type=_int_list, required=True, action=_Once)
    p.add_argument("--n-range", type=_int_range, required=True, action=_Once)
    p.add_argument("--d-range", type=_int_range, required=True, action=_Once)
    p.add_argument("--max-order", type=_positive, default=DEFAULT_MAX_ORDER, action=_Once)
    p.add_argument("--out", action=_Once)
    p.add_argument("--format", choices=["csv", "json"], default="csv", action=_Once)
    p.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1, action=_Once)
    p.add_argument("--no-charsums", action=_OnceFlag)
    p.add_argument("--timing", action=_OnceFlag)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run the acceptance battery")
    p.add_argument("--quick", action=_OnceFlag)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"polydiam: error: {exc}", file=sys.stderr)
        return 2
    except PolydiamError as exc:
        print(f"polydiam: {exc}", file=sys.stderr)
        return 2 if not isinstance(exc, ResourceError) else 1


if __name__ == "__main__":
    sys.exit(main())
