"""Time the hot kernels under the numba and numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel runs once untimed per backend (JIT compilation), then the best of
``--repeat`` runs is reported. Outputs are compared so a speedup never hides
a disagreement.
"""
import argparse
import time

import numpy as np

from polydiam import kernels
from polydiam._accel import NUMBA_AVAILABLE
from polydiam.dlog import build_dlog
from polydiam.ff_core import FieldContext, FieldParams
from polydiam.poly_enum import _irreducible_codes, build_catalog


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    ctx = FieldContext.create(3, 12)  # group order 531440
    tabs = ctx.kernel_tables()
    dlog = build_dlog(ctx)
    g = np.array(dlog.gamma.coeffs, dtype=np.int64)
    steps = dlog.logs(build_catalog(ctx.params, 4).pp_codes)
    yield "power_codes 3^12", lambda b: kernels.power_codes(g, ctx.order, ctx.q, *tabs, backend=b)
    yield "bfs queue 3^12 d=4", lambda b: kernels.bfs_cyclic(ctx.order, steps, backend=b, dense_threshold=10**18)

    ctx2 = FieldContext.create(2, 16)
    tabs2 = ctx2.kernel_tables()
    rng = np.random.default_rng(0)
    A = rng.integers(0, 2, size=(200_000, 16))
    B = rng.integers(0, 2, size=(200_000, 16))
    yield "mul_rows 2^16 x 2e5", lambda b: kernels.mul_rows(A, B, *tabs2, backend=b)

    vec = rng.integers(0, 1000, size=ctx.order)
    exps = np.unique(steps)
    w = np.ones(exps.size, dtype=np.int64)
    yield f"conv_step N=531440 x {exps.size}", lambda b: kernels.conv_step(vec, exps, w, backend=b)

    F = FieldParams.from_q(3)

    def sieve(b):
        _irreducible_codes.cache_clear()
        return _irreducible_codes(F, 11, b)

    yield "sieve I_11 over F_3", sieve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["numba", "numpy"] if NUMBA_AVAILABLE else ["numpy"]
    print(f"{'kernel':34s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in cases():
        results = [best_of(lambda: fn(b), args.repeat) for b in backends]
        if len(results) == 2:
            assert np.array_equal(results[0][1], results[1][1]), f"{name}: backends disagree"
        cols = "".join(f"{t * 1000:10.1f}ms" for t, _ in results)
        speed = f"{results[1][0] / results[0][0]:11.1f}x" if len(results) == 2 else ""
        print(f"{name:34s}{cols}{speed}", flush=True)


if __name__ == "__main__":
    main()
