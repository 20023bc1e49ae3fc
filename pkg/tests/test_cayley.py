import numpy as np
import pytest

from polydiam import cayley
from polydiam.dlog import build_dlog, find_primitive, is_primitive
from polydiam.errors import PreconditionError
from polydiam.ff_core import FieldContext


@pytest.fixture(scope="module")
def f8():
    return FieldContext.create(2, 3, "1,1,0,1")


def test_generators_linear(f8):
    gens = cayley.build_generators(f8, 1)
    assert set(gens.values) == {f8.alpha, f8.element([1, 1])}
    assert gens.multiplicity.tolist() == [1, 1]
    assert gens.regularity == 2


def test_generators_quadratic(f8):
    gens = cayley.build_generators(f8, 2)
    want = {f8.element([0, 0, 1]), f8.element([1, 0, 1]), f8.element([1, 1, 1])}
    assert set(gens.values) == want
    assert gens.regularity == 3
    assert int(gens.total_lambda.sum()) == 4


def test_generators_need_d_below_n(f8):
    with pytest.raises(PreconditionError):
        cayley.build_generators(f8, 3)


def test_diameter_examples(f8):
    res = cayley.diameter(f8, 1)
    assert res.connected and res.diameter == 3
    assert cayley.all_pairs_diameter_oracle(cayley.build_generators(f8, 1), f8) == 3

    f4 = FieldContext.create(2, 2)
    assert f4.modulus.to_string() == "1,1,1"
    res = cayley.diameter(f4, 1)
    assert res.diameter == 1 and res.histogram == {0: 1, 1: 2}


def test_oracle_q3_n2():
    ctx = FieldContext.create(3, 2)
    gens = cayley.build_generators(ctx, 1)
    assert cayley.all_pairs_diameter_oracle(gens, ctx) == cayley.bfs_from_identity(gens, ctx).diameter


@pytest.mark.parametrize("q,n,d", [(3, 4, 2), (2, 8, 3), (7, 3, 1), (5, 3, 2)])
def test_conventions_agree_with_oracle(q, n, d):
    ctx = FieldContext.create(q, n)
    gens = cayley.build_generators(ctx, d)
    a = cayley.bfs_from_identity(gens, ctx, "mul")
    b = cayley.bfs_from_identity(gens, ctx, "div")
    assert a.diameter == b.diameter == cayley.all_pairs_diameter_oracle(gens, ctx)
    assert sum(a.histogram.values()) == ctx.order


def test_eccentric_vertex_is_at_the_diameter(f8):
    res = cayley.diameter(f8, 1)
    dlog = build_dlog(f8)
    assert res.distances[dlog.log_of(res.eccentric_vertex)] == res.diameter


def test_connected_below_weil_range_fails(f8):
    ok, witness = cayley.connectivity_check(f8, 1)
    assert ok and witness is None


def test_subgroup_trapped_generators():
    ctx = FieldContext.create(2, 4)  # group of order 15
    dlog = build_dlog(ctx)
    trapped = cayley.GeneratorSet.from_values(ctx, [dlog.exp_of(3), dlog.exp_of(6)])
    ok, witness = cayley.connectivity_check(ctx, 1, gens=trapped)
    assert not ok
    assert dlog.log_of(witness) % 3 != 0
    assert cayley.all_pairs_diameter_oracle(trapped, ctx) is None


def test_primitive_examples(f8):
    assert is_primitive(f8.alpha, f8)
    assert find_primitive(f8) == f8.alpha
    f3 = FieldContext.create(3, 1)
    assert find_primitive(f3) == f3.element([2])


def test_dlog_roundtrip():
    ctx = FieldContext.create(3, 3)
    dlog = build_dlog(ctx)
    assert sorted(dlog.exp.tolist()) == list(range(1, 27))
    for t in (0, 1, 5, 25):
        assert dlog.log_of(dlog.exp_of(t)) == t
    x, y = ctx.from_code(5), ctx.from_code(17)
    assert dlog.log_of(ctx.mul(x, y)) == (dlog.log_of(x) + dlog.log_of(y)) % ctx.order


def test_to_dict_is_json_ready(f8):
    import json

    d = cayley.diameter(f8, 2).to_dict()
    assert json.loads(json.dumps(d))["f"] == "1,1,0,1"
