"""Primitive elements and discrete-logarithm tables for F_{q^n}^*."""
from __future__ import annotations

import functools
import os
from dataclasses import dataclass

import numpy as np
import sympy

from . import kernels
from .errors import ResourceError
from .ff_core import ExtElem, FieldContext

DEFAULT_MAX_ORDER = int(os.environ.get("POLYDIAM_MAX_ORDER", 2**24))
# q^n - 1 is factored by sympy; refuse absurd sizes instead of hanging.
MAX_FACTOR = 10**30


def group_order_primes(ctx: FieldContext) -> list[int]:
    N = ctx.order
    if N > MAX_FACTOR:
        raise ResourceError(f"group order {N} exceeds the factorization cap {MAX_FACTOR}", "max_factor", MAX_FACTOR)
    return sorted(sympy.primefactors(N))


def is_primitive(x: ExtElem, ctx: FieldContext, primes: list[int] | None = None) -> bool:
    N = ctx.order
    if x == ctx.zero:
        return False
    if primes is None:
        primes = group_order_primes(ctx)
    return all(ctx.pow(x, N // ell) != ctx.one for ell in primes)


def find_primitive(ctx: FieldContext) -> ExtElem:
    """First element, in residue-code order, generating F_{q^n}^*."""
    primes = group_order_primes(ctx)
    # constants have order dividing q - 1, so for n >= 2 the search starts at alpha
    start = ctx.q if ctx.n >= 2 else 1
    for code in range(start, ctx.q**ctx.n):
        x = ctx.from_code(code)
        if is_primitive(x, ctx, primes):
            return x
    raise AssertionError("multiplicative group has no generator; modulus is not irreducible")


@dataclass(frozen=True, eq=False)
class DlogTable:
    """``exp[t]`` is the code of gamma^t; ``log[code]`` inverts it (-1 at 0)."""

    ctx: FieldContext
    gamma: ExtElem
    exp: np.ndarray
    log: np.ndarray

    @property
    def order(self) -> int:
        return int(self.exp.size)

    def log_of(self, x: ExtElem) -> int:
        t = int(self.log[self.ctx.code(x)])
        if t < 0:
            raise ValueError("discrete log of zero")
        return t

    def exp_of(self, t: int) -> ExtElem:
        return self.ctx.from_code(int(self.exp[t % self.order]))

    def logs(self, codes) -> np.ndarray:
        return self.log[np.asarray(codes, dtype=np.int64)]


def build_dlog(ctx: FieldContext, max_order: int = DEFAULT_MAX_ORDER, backend: str | None = None) -> DlogTable:
    N = ctx.order
    if N > max_order:
        raise ResourceError(f"group order {N} exceeds max_order {max_order}", "max_order", max_order)
    return _build_dlog(ctx, backend)


@functools.lru_cache(maxsize=8)
def _build_dlog(ctx: FieldContext, backend: str | None) -> DlogTable:
    N = ctx.order
    gamma = find_primitive(ctx)
    add_tab, mul_tab, negf = ctx.kernel_tables()
    exp = kernels.power_codes(np.array(gamma.coeffs, dtype=np.int64), N, ctx.q, add_tab, mul_tab, negf, backend=backend)
    log = np.full(N + 1, -1, dtype=np.int64)
    log[exp] = np.arange(N, dtype=np.int64)
    if (log[1:] < 0).any() or log[0] != -1:
        raise AssertionError("powers of the primitive element do not cover the group")
    exp.flags.writeable = False
    log.flags.writeable = False
    return DlogTable(ctx, gamma, exp, log)
