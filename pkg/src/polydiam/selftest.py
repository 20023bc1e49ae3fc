"""The exhaustive small-instance acceptance battery.

Each ``criterion_*`` function runs one family of checks and returns a
:class:`CriterionResult`; :func:`run_selftest` prints one line per criterion.
"""
from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np
import sympy

from . import bounds, cayley, charsum
from .dlog import build_dlog
from .ff_core import FieldContext, FieldParams, FqPoly
from .poly_enum import build_catalog, count_irreducibles, count_prime_powers, irreducible_codes


@dataclass
class CriterionResult:
    number: int
    name: str
    time_limit: float
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    def check(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(what)

    @property
    def within_time(self) -> bool:
        return self.seconds <= self.time_limit

    @property
    def passed(self) -> bool:
        return not self.failures and self.checks > 0 and self.within_time

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = ""
        if self.failures:
            extra = f"; first failure: {self.failures[0]}"
        elif not self.within_time:
            extra = f"; over time limit {self.time_limit:.0f}s"
        return f"[{status}] {self.number}. {self.name}: {self.checks} checks in {self.seconds:.1f}s{extra}"


def _timed(number, name, limit):
    def deco(fn):
        def wrapper(*args, **kwargs):
            res = CriterionResult(number, name, limit)
            start = time.perf_counter()
            fn(res, *args, **kwargs)
            res.seconds = time.perf_counter() - start
            return res

        wrapper.__name__ = fn.__name__
        wrapper.__doc__ = fn.__doc__
        return wrapper

    return deco


def prime_powers_up_to(limit: int) -> list[int]:
    return [q for q in range(2, limit + 1) if len(sympy.factorint(q)) == 1]


COUNT_GRID = [(q, d) for q in (2, 3, 4, 5, 7) for d in range(1, 7) if q**d <= 10**6]


def field_cells(max_size: int, min_n: int = 2, inclusive_order: bool = False):
    """(q, n) with n >= min_n and q^n <= max_size (or q^n - 1 <= max_size)."""
    out = []
    for q in prime_powers_up_to(max_size):
        n = min_n
        while (q**n - 1 if inclusive_order else q**n) <= max_size:
            out.append((q, n))
            n += 1
    return out


def bound_cells(max_order: int = 10**6):
    return [
        (q, n, d)
        for q, n in field_cells(max_order, inclusive_order=True)
        for d in range(1, n)
        if bounds.below_weil_range(q, n, d)
    ]


# ---------------------------------------------------------------- criteria


@_timed(1, "irreducible count = Moebius formula", 30)
def criterion_counting(res: CriterionResult):
    for q, d in COUNT_GRID:
        got = len(irreducible_codes(FieldParams.from_q(q), d))
        res.check(got == count_irreducibles(q, d), f"#I_{d} over F_{q}: enumerated {got}")


@_timed(2, "sum of Lambda over P_d = q^d", 10)
def criterion_von_mangoldt(res: CriterionResult):
    for q, d in COUNT_GRID:
        cat = build_catalog(FieldParams.from_q(q), d)
        res.check(int(cat.pp_lambda.sum()) == q**d, f"sum Lambda over P_{d}, q={q}")
        res.check(cat.num_prime_powers == count_prime_powers(q, d), f"#P_{d}, q={q}")


def moduli_for(q: int, n: int) -> list[FqPoly]:
    """The first irreducible of degree n and, when one exists, the last."""
    codes = irreducible_codes(FieldParams.from_q(q), n)
    picks = [int(codes[0])] if codes.size == 1 else [int(codes[0]), int(codes[-1])]
    return [FqPoly.monic_from_code(c, n, q) for c in picks]


@_timed(3, "BFS diameter = all-pairs oracle (q^n <= 512)", 60)
def criterion_oracle(res: CriterionResult):
    single = []
    for q, n in field_cells(512):
        mods = moduli_for(q, n)
        if len(mods) == 1:
            single.append((q, n))
        for f in mods:
            ctx = FieldContext.create(q, n, f)
            for d in range(1, n):
                gens = cayley.build_generators(ctx, d)
                a = cayley.bfs_from_identity(gens, ctx, "mul")
                b = cayley.bfs_from_identity(gens, ctx, "div")
                oracle = cayley.all_pairs_diameter_oracle(gens, ctx)
                tag = f"q={q} n={n} d={d} f={f.to_string()}"
                res.check(a.diameter == b.diameter == oracle, f"{tag}: {a.diameter}/{b.diameter}/{oracle}")
                nbr = cayley.explicit_out_neighbours(gens, ctx)
                degrees = {len(set(row)) for row in nbr.tolist()}
                res.check(degrees == {gens.distinct_count}, f"{tag}: out-degrees {degrees}")
    if single:
        res.notes.append(f"only one irreducible modulus exists for {single}")


@_timed(4, "exact diameter <= every applicable bound (q^n - 1 <= 10^6)", 300)
def criterion_bounds(res: CriterionResult, max_order: int = 10**6):
    anchors = {(5, 5, 2): (37.06, 37.44, None), (11, 3, 1): (None, None, 9.20)}
    for (q, n, d), (lwwz, thm1, thm2) in anchors.items():
        rep = bounds.evaluate_bounds(q, n, d)
        for want, got in ((lwwz, rep.bound_lwwz), (thm1, rep.bound_thm1), (thm2, rep.bound_thm2)):
            if want is not None:
                res.check(got is not None and abs(got - want) < 0.005, f"anchor ({q},{n},{d}): {got} vs {want}")
    ctx = None
    for q, n, d in bound_cells(max_order):
        if ctx is None or (ctx.q, ctx.n) != (q, n):
            ctx = FieldContext.create(q, n)
        rep = bounds.compare(ctx, d)
        res.check(bool(rep.connected), f"q={q} n={n} d={d} disconnected")
        res.check(not rep.violated, f"q={q} n={n} d={d}: D={rep.exact_diameter} flags={rep.flags}")
        if (q, n, d) in anchors:
            res.notes.append(f"D({q},{n},{d}) = {rep.exact_diameter}")


@_timed(5, "Weil bound on S (q^n <= 10^5)", 120)
def criterion_weil(res: CriterionResult):
    worst = 0.0
    for q, n in field_cells(10**5):
        ctx = FieldContext.create(q, n)
        dlog = build_dlog(ctx)
        for d in range(1, n):
            rep = charsum.verify_weil(ctx, d, dlog=dlog)
            worst = max(worst, rep.ratio)
            res.check(rep.passed, f"q={q} n={n} d={d}: max|S|={rep.max_abs:.6g} bound={rep.bound:.6g}")
    res.notes.append(f"largest ratio max|S|/bound = {worst:.4f}")


def moment_cells():
    out = []
    for q, n in field_cells(10**4):
        for d in range(1, n):
            m = charsum.moment_exponent(n, d)
            if count_irreducibles(q, d) ** (2 * m) <= 10**8:
                out.append((q, n, d))
    return out


@_timed(6, "moment identity and bound (q^n <= 10^4)", 120)
def criterion_moment(res: CriterionResult):
    for q, n, d in moment_cells():
        ctx = FieldContext.create(q, n)
        rep = charsum.verify_moment(ctx, d, exact=True)
        tag = f"q={q} n={n} d={d} m={rep.m}"
        res.check(rep.float_rel_error <= charsum.FLOAT_RTOL, f"{tag}: float rel error {rep.float_rel_error}")
        res.check(rep.lhs_exact == (q**n - 1) * rep.collisions_multiset, f"{tag}: exact identity")
        res.check(rep.collisions_multiset <= rep.bound, f"{tag}: N={rep.collisions_multiset} > {rep.bound}")


@_timed(7, "representation counters M_k and N_k", 120)
def criterion_repcount(res: CriterionResult):
    ctx = FieldContext.create(5, 5)
    k = math.ceil(bounds.bound_thm1(5, 5, 2))
    cat = build_catalog(ctx.params, 2)
    mk = charsum.rep_count_Mk(ctx, 2, k, catalog=cat)
    D = cayley.diameter(ctx, 2).diameter
    res.check(mk.all_positive, f"M_{k} has a zero on (5,5,2)")
    res.check(mk.total == mk.expected_total, "M_k mass formula")
    res.check(D is not None and D <= k, f"BFS diameter {D} > k={k}")
    bsq = charsum.mk_deviation_bound_squared(5, 5, 2, k, cat.num_irreducibles)
    res.check(mk.max_deviation_ok(bsq), "M_k deviation bound")

    ctx = FieldContext.create(11, 3)
    k = math.ceil(bounds.bound_thm2(11, 3))
    nk = charsum.rep_count_Nk(ctx, k)
    D = cayley.diameter(ctx, 1).diameter
    res.check(nk.all_positive, f"N_{k} has a zero on (11,3)")
    res.check(nk.total == nk.expected_total == 11**k, "N_k mass formula")
    res.check(D is not None and D <= k, f"BFS diameter {D} > k={k}")
    res.check(nk.max_deviation_ok(charsum.nk_deviation_bound_squared(11, 3, k)), "N_k deviation bound")


@_timed(8, "character orthogonality and multiplicativity (q^n <= 512)", 10)
def criterion_characters(res: CriterionResult):
    for q, n in field_cells(512):
        ctx = FieldContext.create(q, n)
        dlog = build_dlog(ctx)
        tol = 1e-6 * ctx.order
        r1 = charsum.orthogonality_residual(ctx, dlog)
        res.check(r1 <= tol, f"orthogonality q={q} n={n}: {r1}")
        r2 = charsum.multiplicativity_residual(ctx, dlog)
        res.check(r2 <= tol, f"multiplicativity q={q} n={n}: {r2}")


@_timed(9, "asymptotic constants improved < old", 1)
def criterion_asymptotic(res: CriterionResult):
    for theta in np.linspace(0, 0.5, 102)[1:-1]:
        c = bounds.asymptotic_constants(float(theta))
        res.check(c["improved"] < c["old"], f"theta={theta}")
    c = bounds.asymptotic_constants(0.25)
    res.check(abs(c["improved"] - 3) < 1e-12 and abs(c["old"] - 4) < 1e-12, f"theta=1/4 gives {c}")


ALL_CRITERIA = [
    criterion_counting,
    criterion_von_mangoldt,
    criterion_oracle,
    criterion_bounds,
    criterion_weil,
    criterion_moment,
    criterion_repcount,
    criterion_characters,
    criterion_asymptotic,
]


def _warm_up():
    # numba compilation (or cache loading) is not part of any criterion's budget
    ctx = FieldContext.create(2, 3)
    dlog = build_dlog(ctx)
    charsum.multiplicativity_residual(ctx, dlog)
    cayley.diameter(ctx, 1)
    charsum.rep_count_Nk(ctx, 3)
    build_catalog(ctx.params, 2)


def run_selftest(quick: bool = False, stream=sys.stdout) -> int:
    """Run the battery; ``quick`` shrinks criterion 4 to q^n - 1 <= 10^4."""
    _warm_up()
    results = []
    for crit in ALL_CRITERIA:
        if quick and crit is criterion_bounds:
            r = crit(max_order=10**4)
        else:
            r = crit()
        results.append(r)
        print(r.line(), file=stream, flush=True)
        for note in r.notes:
            print(f"       {note}", file=stream)
    total = sum(r.checks for r in results)
    failed = [r for r in results if not r.passed]
    print(f"{total} assertions across {len(results)} criteria; {len(failed)} failed", file=stream)
    return 1 if failed else 0
