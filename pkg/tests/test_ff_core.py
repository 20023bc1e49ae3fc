import itertools

import pytest

from polydiam.errors import DomainError, PreconditionError
from polydiam.ff_core import (
    FieldContext,
    FieldParams,
    FqPoly,
    evaluate_at_alpha,
    ext_inv,
    ext_mul,
    first_irreducible,
    irreducibility_test,
    poly_mul,
    prime_power,
)


def schoolbook_mulmod(a, b, f, F):
    """Independent product mod f: full convolution, then reduce top-down."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = F.add(prod[i + j], F.mul(x, y))
    n = len(f) - 1
    for top in range(len(prod) - 1, n - 1, -1):
        c = prod[top]
        if c:
            for i in range(n + 1):
                prod[top - n + i] = F.sub(prod[top - n + i], F.mul(c, f[i]))
    return tuple(prod[:n]) + (0,) * max(0, n - len(prod))


def trial_division_irreducible(g: FqPoly, F: FieldParams) -> bool:
    """Brute force: no monic factor of degree 1..deg/2 divides g."""
    from polydiam.ff_core import poly_mod

    q = F.q
    for k in range(1, g.degree // 2 + 1):
        for code in range(q**k):
            h = FqPoly.monic_from_code(code, k, q)
            if poly_mod(F, g, h).is_zero:
                return False
    return True


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(7) == (7, 1)
    with pytest.raises(DomainError):
        prime_power(12)
    with pytest.raises(DomainError):
        prime_power(1)


def test_base_field_examples():
    F5 = FieldParams.from_q(5)
    assert F5.add(3, 4) == 2
    assert F5.inv(2) == 3
    F4 = FieldParams.from_q(4)
    assert F4.base_modulus == (1, 1, 1)
    assert F4.mul(2, 2) == 3
    with pytest.raises(DomainError):
        F5.inv(0)


@pytest.mark.parametrize("q", [2, 3, 4, 8, 9, 25])
def test_base_field_is_a_field(q):
    F = FieldParams.from_q(q)
    for a in range(q):
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    for a, b in itertools.product(range(q), repeat=2):
        assert F.mul(a, b) == F.mul(b, a)
        assert F.add(a, b) == F.add(b, a)


def test_polynomial_strings():
    f = FqPoly.parse("1,1,0,1")
    assert f.degree == 3 and f.is_monic
    assert f.to_string() == "1,1,0,1"
    assert FqPoly.monic_from_code(f.lower_code(2), 3, 2) == f
    with pytest.raises(DomainError):
        FqPoly.parse("1,x")


def test_ext_mul_examples():
    ctx = FieldContext.create(2, 3, "1,1,0,1")
    a = ctx.alpha
    a2 = ctx.element([0, 0, 1])
    assert ext_mul(a, a2, ctx) == ctx.element([1, 1])
    assert ext_mul(a2, ctx.one, ctx) == a2

    ctx3 = FieldContext.create(3, 2, "1,0,1")
    assert ext_mul(ctx3.element([1, 1]), ctx3.element([2, 1]), ctx3) == ctx3.one


def test_ext_inv_examples():
    ctx = FieldContext.create(2, 3, "1,1,0,1")
    assert ext_inv(ctx.one, ctx) == ctx.one
    assert ext_inv(ctx.alpha, ctx) == ctx.element([1, 0, 1])
    with pytest.raises(DomainError):
        ext_inv(ctx.zero, ctx)


@pytest.mark.parametrize("q,n", [(2, 4), (3, 3), (4, 2), (5, 2), (9, 2)])
def test_ext_mul_matches_schoolbook(q, n):
    ctx = FieldContext.create(q, n)
    F, f = ctx.params, ctx.modulus.coeffs
    for x in range(1, ctx.q**n):
        a = ctx.from_code(x)
        b = ctx.from_code((7 * x + 3) % ctx.q**n)
        assert ext_mul(a, b, ctx).coeffs == schoolbook_mulmod(a.coeffs, b.coeffs, f, F)
        assert ext_mul(a, ext_inv(a, ctx), ctx) == ctx.one


def test_evaluate_at_alpha():
    ctx = FieldContext.create(2, 3, "1,1,0,1")
    assert evaluate_at_alpha(FqPoly((0, 1)), ctx) == ctx.alpha
    assert evaluate_at_alpha(FqPoly((1, 1, 1)), ctx) == ctx.element([1, 1, 1])
    sq = poly_mul(ctx.params, FqPoly((1, 1)), FqPoly((1, 1)))
    assert evaluate_at_alpha(sq, ctx) == ctx.element([1, 0, 1])
    with pytest.raises(PreconditionError):
        evaluate_at_alpha(ctx.modulus, ctx)


def test_irreducibility_examples():
    F2, F3 = FieldParams.from_q(2), FieldParams.from_q(3)
    assert irreducibility_test(FqPoly((1, 1, 1)), F2)
    assert not irreducibility_test(FqPoly((1, 0, 1)), F2)
    assert irreducibility_test(FqPoly((1, 0, 1)), F3)
    with pytest.raises(PreconditionError):
        irreducibility_test(FqPoly((1, 2)), F3)


@pytest.mark.parametrize("q,deg", [(2, 6), (3, 4), (4, 3), (5, 3)])
def test_rabin_matches_trial_division(q, deg):
    F = FieldParams.from_q(q)
    for code in range(q**deg):
        g = FqPoly.monic_from_code(code, deg, q)
        assert irreducibility_test(g, F) == trial_division_irreducible(g, F), g.to_string()


def test_default_modulus_is_smallest_code():
    assert first_irreducible(FieldParams.from_q(2), 3).to_string() == "1,1,0,1"
    assert first_irreducible(FieldParams.from_q(3), 2).to_string() == "1,0,1"


def test_reducible_modulus_rejected():
    with pytest.raises(DomainError):
        FieldContext.create(2, 2, "1,0,1")
    with pytest.raises(DomainError):
        FieldContext.create(2, 3, "1,1,1")
