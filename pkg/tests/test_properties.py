import math

from hypothesis import given, settings
from hypothesis import strategies as st

from polydiam import bounds
from polydiam.charsum import moment_exponent
from polydiam.ff_core import FieldContext

FIELDS = [FieldContext.create(q, n) for q, n in [(2, 5), (3, 3), (4, 2), (5, 2), (7, 2), (9, 2)]]


@st.composite
def field_triples(draw):
    ctx = draw(st.sampled_from(FIELDS))
    codes = st.integers(0, ctx.q**ctx.n - 1)
    return ctx, *(ctx.from_code(draw(codes)) for _ in range(3))


@given(field_triples())
@settings(max_examples=200, deadline=None)
def test_field_axioms(t):
    ctx, a, b, c = t
    assert ctx.mul(a, b) == ctx.mul(b, a)
    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
    assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
    assert ctx.add(a, ctx.zero) == a and ctx.mul(a, ctx.one) == a
    if a != ctx.zero:
        assert ctx.mul(a, ctx.inv(a)) == ctx.one
        assert ctx.pow(a, ctx.order) == ctx.one


@given(st.integers(2, 500), st.integers(1, 60))
def test_moment_exponent_bracket(n, d):
    m = moment_exponent(n, d)
    assert m * d < n <= (m + 1) * d


@given(st.floats(1e-6, 0.5 - 1e-6))
def test_improved_constant_is_smaller(theta):
    c = bounds.asymptotic_constants(theta)
    assert c["improved"] < c["old"]


@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49]), st.integers(2, 12), st.integers(1, 6))
def test_bounds_exceed_trivial_floor(q, n, d):
    # each bound that applies must at least allow n/d steps
    for value in (bounds.bound_lwwz(q, n, d), bounds.bound_thm1(q, n, d)):
        if value is not None:
            assert value >= n / d and math.isfinite(value)
