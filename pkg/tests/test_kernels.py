"""The numba and numpy backends must agree bit for bit."""
import numpy as np
import pytest

from polydiam import kernels
from polydiam._accel import NUMBA_AVAILABLE, resolve_backend
from polydiam.ff_core import FieldContext, FieldParams
from polydiam.poly_enum import _irreducible_codes

pytestmark = pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")


@pytest.mark.parametrize("q,n", [(2, 10), (3, 5), (4, 4), (9, 3), (11, 3)])
def test_power_codes(q, n):
    ctx = FieldContext.create(q, n)
    tabs = ctx.kernel_tables()
    g = np.array(ctx.element([1, 1]).coeffs, dtype=np.int64)
    a = kernels.power_codes(g, 300, q, *tabs, backend="numba")
    b = kernels.power_codes(g, 300, q, *tabs, backend="numpy")
    assert np.array_equal(a, b)
    x = ctx.one
    for t in range(5):
        assert a[t] == ctx.code(x)
        x = ctx.mul(x, ctx.element([1, 1]))


def test_mul_rows():
    ctx = FieldContext.create(5, 4)
    tabs = ctx.kernel_tables()
    rng = np.random.default_rng(1)
    A = rng.integers(0, 5, size=(200, 4))
    B = rng.integers(0, 5, size=(200, 4))
    got = kernels.mul_rows(A, B, *tabs, backend="numba")
    assert np.array_equal(got, kernels.mul_rows(A, B, *tabs, backend="numpy"))
    for i in range(0, 200, 37):
        want = ctx.mul(ctx.element(A[i].tolist()), ctx.element(B[i].tolist()))
        assert tuple(got[i].tolist()) == want.coeffs


@pytest.mark.parametrize("N,steps", [(7, [1, 3]), (80, [5, 17, 40]), (4095, [1, 64, 1000]), (1000, [10, 20])])
def test_bfs_backends(N, steps):
    steps = np.array(steps, dtype=np.int64)
    a = kernels.bfs_cyclic(N, steps, backend="numba", dense_threshold=10**18)
    b = kernels.bfs_cyclic(N, steps, backend="numpy", dense_threshold=10**18)
    c = kernels.bfs_cyclic(N, steps, backend="numpy", dense_threshold=0)
    assert np.array_equal(a, b) and np.array_equal(a, c)


def test_bfs_unreachable():
    dist = kernels.bfs_cyclic(12, np.array([4, 8]), backend="numpy")
    assert (dist[np.arange(12) % 4 != 0] == -1).all()
    assert dist[4] == 1 and dist[0] == 0


def test_conv_step():
    rng = np.random.default_rng(2)
    vec = rng.integers(0, 100, size=500)
    exps = np.array([0, 3, 499, 250])
    w = np.array([1, 2, 3, 4])
    a = kernels.conv_step(vec, exps, w, backend="numba")
    assert np.array_equal(a, kernels.conv_step(vec, exps, w, backend="numpy"))
    assert a.sum() == vec.sum() * w.sum()
    big = vec.astype(object) * (2**70)
    assert kernels.conv_step(big, exps, w).tolist() == [x * 2**70 for x in a.tolist()]


@pytest.mark.parametrize("q,d", [(2, 8), (3, 5), (4, 4), (5, 3)])
def test_sieve_backends(q, d):
    F = FieldParams.from_q(q)
    assert np.array_equal(_irreducible_codes(F, d, "numba"), _irreducible_codes(F, d, "numpy"))


def test_resolve_backend():
    assert resolve_backend("numpy") == "numpy"
    with pytest.raises(ValueError):
        resolve_backend("cuda")
