import math

import numpy as np
import pytest

from polydiam import cayley, charsum
from polydiam.dlog import build_dlog
from polydiam.errors import PreconditionError
from polydiam.ff_core import FieldContext
from polydiam.poly_enum import build_catalog


@pytest.fixture(scope="module")
def small():
    ctx = FieldContext.create(3, 4)
    return ctx, build_dlog(ctx)


def test_principal_sums(small):
    ctx, dlog = small
    cat = build_catalog(ctx.params, 2)
    assert abs(charsum.compute_S(ctx, cat, dlog, 0) - 9) < 1e-9
    assert abs(charsum.compute_T(ctx, cat, dlog, 0) - cat.num_irreducibles) < 1e-9


def test_fft_sums_match_direct(small):
    ctx, dlog = small
    cat = build_catalog(ctx.params, 2)
    S, T = charsum.all_S(cat, dlog), charsum.all_T(cat, dlog)
    for j in (1, 7, 40, 79):
        assert abs(S[j] - charsum.compute_S(ctx, cat, dlog, j)) < 1e-9
        assert abs(T[j] - charsum.compute_T(ctx, cat, dlog, j)) < 1e-9


def test_character_is_multiplicative(small):
    ctx, dlog = small
    x, y = ctx.from_code(11), ctx.from_code(60)
    for j in (1, 3, 17):
        lhs = charsum.character(j, ctx.mul(x, y), dlog)
        assert abs(lhs - charsum.character(j, x, dlog) * charsum.character(j, y, dlog)) < 1e-12


@pytest.mark.parametrize("q,n,d", [(3, 4, 1), (3, 4, 2), (5, 3, 2), (2, 9, 4)])
def test_weil(q, n, d):
    rep = charsum.verify_weil(FieldContext.create(q, n), d)
    assert rep.passed and rep.ratio <= 1 + charsum.FLOAT_RTOL


def test_moment_exponent():
    assert charsum.moment_exponent(5, 2) == 2
    assert charsum.moment_exponent(4, 2) == 1
    assert charsum.moment_exponent(7, 3) == 2


def brute_collisions(num, m):
    from collections import Counter
    from itertools import product

    c = Counter(tuple(sorted(t)) for t in product(range(num), repeat=m))
    return sum(v * v for v in c.values())


@pytest.mark.parametrize("num,m", [(1, 1), (3, 2), (4, 3), (5, 2), (2, 4)])
def test_multiset_collisions(num, m):
    assert charsum.multiset_collisions(num, m) == brute_collisions(num, m)
    assert charsum.multiset_collisions(num, m) <= math.factorial(m) * num**m


def test_collisions_m2_closed_form():
    for num in range(1, 20):
        assert charsum.multiset_collisions(num, 2) == num * (2 * num - 1)


@pytest.mark.parametrize("q,n,d", [(3, 5, 2), (2, 7, 3), (4, 3, 1), (5, 5, 2)])
def test_moment_exact_and_float(q, n, d):
    ctx = FieldContext.create(q, n)
    rep = charsum.verify_moment(ctx, d, exact=True)
    assert rep.passed
    assert rep.lhs_exact == (q**n - 1) * rep.collisions_multiset == (q**n - 1) * rep.collisions_group
    assert rep.float_rel_error <= charsum.FLOAT_RTOL


def test_spectrum(small):
    ctx, dlog = small
    gens = cayley.build_generators(ctx, 2)
    eig = charsum.cayley_spectrum(gens, dlog, ctx)
    assert abs(eig[0] - gens.regularity) < 1e-9
    assert abs(eig.sum()) < 1e-6  # 1 is not a generator value


def test_spectrum_sum_counts_identity(small):
    ctx, dlog = small
    gens = cayley.GeneratorSet.from_values(ctx, [ctx.one, ctx.one, ctx.alpha])
    eig = charsum.cayley_spectrum(gens, dlog, ctx)
    assert abs(eig.sum() - 2 * ctx.order) < 1e-6


def test_nk_single_step():
    ctx = FieldContext.create(5, 3)
    dlog = build_dlog(ctx)
    vec = charsum.rep_count_Nk(ctx, 1)
    hits = {dlog.log_of(ctx.element([u, 1])) for u in range(5)}
    assert {t for t, c in enumerate(vec.counts.tolist()) if c} == hits
    assert max(vec.counts.tolist()) == 1


def test_mk_mass_and_positivity():
    ctx = FieldContext.create(3, 4)
    cat = build_catalog(ctx.params, 2)
    vec = charsum.rep_count_Mk(ctx, 2, 6, catalog=cat)
    assert vec.total == vec.expected_total == 9**4 * cat.num_irreducibles**2
    bsq = charsum.mk_deviation_bound_squared(3, 4, 2, 6, cat.num_irreducibles)
    assert vec.max_deviation_ok(bsq)
    with pytest.raises(PreconditionError):
        charsum.rep_count_Mk(ctx, 2, 2, catalog=cat)


def test_nk_big_integer_mode():
    ctx = FieldContext.create(11, 3)
    vec = charsum.rep_count_Nk(ctx, 20)
    assert vec.counts.dtype == object
    assert vec.total == 11**20
    assert vec.all_positive


def test_orthogonality_and_multiplicativity(small, backend):
    ctx, dlog = small
    assert charsum.orthogonality_residual(ctx, dlog) < 1e-6 * ctx.order
    assert charsum.multiplicativity_residual(ctx, dlog, backend=backend) < 1e-6 * ctx.order


def test_residuals_detect_a_corrupted_log_table(small, backend):
    from polydiam.dlog import DlogTable

    ctx, dlog = small
    log = dlog.log.copy()
    a, b = ctx.code(ctx.alpha), ctx.code(ctx.element([1, 1]))
    log[a], log[b] = log[b], log[a]
    bad = DlogTable(ctx, dlog.gamma, dlog.exp, log)
    assert charsum.multiplicativity_residual(ctx, bad, backend=backend) > 0.1
