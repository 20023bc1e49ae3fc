"""Multiplicative characters of F_{q^n}^* and the sums built from them.

chi_j(gamma^t) = exp(2 pi i j t / N) with N = q^n - 1 and gamma the primitive
element of the context's DlogTable. A sum over a weighted set of field
elements becomes a weight vector over exponents, so all N character sums
come from one FFT; the direct per-j evaluation is kept as an independent
check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from ._accel import njit, resolve_backend
from .dlog import DEFAULT_MAX_ORDER, DlogTable, build_dlog, find_primitive  # noqa: F401 (re-export)
from .errors import PreconditionError, ResourceError
from .ff_core import ExtElem, FieldContext
from .poly_enum import DEFAULT_ENUM_CAP, PolyCatalog, build_catalog

WEIL_MAX_ORDER = 10**5
MOMENT_MAX_ORDER = 10**4
FLOAT_RTOL = 1e-6
# int64 accumulators are used while every entry provably stays below this
_INT64_SAFE = 2**62


def moment_exponent(n: int, d: int) -> int:
    """m = ceil(n/d) - 1, the largest m with d*m < n."""
    return -(-n // d) - 1


# ---------------------------------------------------------------- characters


def character(j: int, x: ExtElem, dlog: DlogTable) -> complex:
    N = dlog.order
    t = dlog.log_of(x)
    return complex(np.exp(2j * np.pi * ((j * t) % N) / N))


def exponent_weights(codes, weights, dlog: DlogTable, dtype=np.float64) -> np.ndarray:
    """Dense vector w[t] = total weight of the elements equal to gamma^t."""
    logs = dlog.logs(codes)
    if (logs < 0).any():
        raise PreconditionError("zero cannot be evaluated by a multiplicative character")
    w = np.bincount(logs, weights=np.asarray(weights, dtype=np.float64), minlength=dlog.order)
    return w.astype(dtype)


def all_character_sums(w: np.ndarray) -> np.ndarray:
    """sum_t w[t] exp(2 pi i j t / N) for every j, via one FFT."""
    return w.size * np.fft.ifft(w)


def direct_character_sum(logs, weights, j: int, N: int) -> complex:
    logs = np.asarray(logs, dtype=np.int64)
    angles = 2 * np.pi * ((j * logs) % N) / N
    return complex(np.sum(np.asarray(weights, dtype=np.float64) * np.exp(1j * angles)))


def _catalog_for(ctx: FieldContext, d: int, catalog: PolyCatalog | None, cap: int = DEFAULT_ENUM_CAP):
    if not 1 <= d < ctx.n:
        raise PreconditionError(f"character sums need 1 <= d < n (d={d}, n={ctx.n})")
    return catalog if catalog is not None else build_catalog(ctx.params, d, cap)


def compute_S(ctx: FieldContext, catalog: PolyCatalog, dlog: DlogTable, j: int) -> complex:
    """sum over g in P_d of Lambda(g) chi_j(g(alpha))."""
    _catalog_for(ctx, catalog.d, catalog)
    return direct_character_sum(dlog.logs(catalog.pp_codes), catalog.pp_lambda, j, dlog.order)


def compute_T(ctx: FieldContext, catalog: PolyCatalog, dlog: DlogTable, j: int) -> complex:
    """sum over h in I_d of chi_j(h(alpha))."""
    _catalog_for(ctx, catalog.d, catalog)
    return direct_character_sum(dlog.logs(catalog.irr_full_codes), np.ones(catalog.num_irreducibles), j, dlog.order)


def all_S(catalog: PolyCatalog, dlog: DlogTable) -> np.ndarray:
    return all_character_sums(exponent_weights(catalog.pp_codes, catalog.pp_lambda, dlog))


def all_T(catalog: PolyCatalog, dlog: DlogTable) -> np.ndarray:
    return all_character_sums(exponent_weights(catalog.irr_full_codes, np.ones(catalog.num_irreducibles), dlog))


def cayley_spectrum(gens, dlog: DlogTable, ctx: FieldContext) -> np.ndarray:
    """Eigenvalues lambda_j = sum over the generator multiset of chi_j(e)."""
    return all_character_sums(exponent_weights(gens.codes, gens.multiplicity, dlog))


# ---------------------------------------------------------------- Weil


def weil_bound(q: int, n: int, d: int) -> float:
    return (n - 1) * q ** (d / 2)


@dataclass(frozen=True)
class WeilReport:
    q: int
    n: int
    d: int
    principal: float
    max_abs: float
    argmax_j: int
    bound: float
    ratio: float
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__, check="weil")


def verify_weil(
    ctx: FieldContext, d: int, max_order: int = WEIL_MAX_ORDER, catalog: PolyCatalog | None = None,
    dlog: DlogTable | None = None,
) -> WeilReport:
    """max over nonprincipal chi of |S(chi)| against (n-1) q^(d/2)."""
    if ctx.order > max_order:
        raise ResourceError(f"Weil check needs q^n - 1 <= {max_order}", "weil_max_order", max_order)
    catalog = _catalog_for(ctx, d, catalog)
    dlog = dlog if dlog is not None else build_dlog(ctx, max_order)
    S = all_S(catalog, dlog)
    mags = np.abs(S[1:])
    j = int(np.argmax(mags)) + 1 if mags.size else 0
    max_abs = float(mags.max()) if mags.size else 0.0
    bound = weil_bound(ctx.q, ctx.n, d)
    principal_ok = abs(S[0] - ctx.q**d) <= FLOAT_RTOL * ctx.q**d
    return WeilReport(
        q=ctx.q, n=ctx.n, d=d, principal=float(S[0].real), max_abs=max_abs, argmax_j=j, bound=bound,
        ratio=max_abs / bound if bound else math.inf,
        passed=bool(principal_ok and max_abs <= bound * (1 + FLOAT_RTOL)),
    )


# ---------------------------------------------------------------- moment


def multiset_collisions(num: int, m: int) -> int:
    """Pairs of ordered m-tuples from a set of ``num`` symbols with equal multisets.

    Equals (m!)^2 [x^m] (sum_c x^c / (c!)^2)^num.
    """
    base = [Fraction(1, math.factorial(c) ** 2) for c in range(m + 1)]

    def mul(a, b):
        out = [Fraction(0)] * (m + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(m + 1 - i):
                    out[i + j] += x * b[j]
        return out

    result = [Fraction(1)] + [Fraction(0)] * m
    e = num
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    value = result[m] * math.factorial(m) ** 2
    assert value.denominator == 1
    return int(value)


def product_distribution(exps, N: int, m: int, backend: str | None = None) -> np.ndarray:
    """c[t] = number of ordered m-tuples of the given exponents summing to t mod N."""
    vec = np.zeros(N, dtype=np.int64)
    vec[0] = 1
    exps = np.asarray(exps, dtype=np.int64)
    if len(exps) ** m >= _INT64_SAFE:
        vec = vec.astype(object)
    ones = np.ones(exps.size, dtype=np.int64)
    for _ in range(m):
        vec = kernels.conv_step(vec, exps, ones, backend=backend)
    return vec


@dataclass(frozen=True)
class MomentReport:
    q: int
    n: int
    d: int
    m: int
    num_irreducibles: int
    lhs_float: float
    lhs_exact: int | None
    collisions_group: int | None
    collisions_multiset: int
    bound: int
    float_rel_error: float
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__, check="moment")


def verify_moment(
    ctx: FieldContext, d: int, exact: bool = True, max_order: int = MOMENT_MAX_ORDER,
    catalog: PolyCatalog | None = None, dlog: DlogTable | None = None, backend: str | None = None,
) -> MomentReport:
    """Check sum_chi |T(chi)|^(2m) = (q^n - 1) N and N <= m! (#I_d)^m.

    N is counted on the polynomial side (equal multisets of irreducibles,
    valid because dm < n). Float mode takes the left side from the FFT of the
    I_d exponent vector; exact mode takes it as (q^n - 1) sum_t c[t]^2 with c
    the integer distribution of m-fold products over exponents.
    """
    if ctx.order > max_order:
        raise ResourceError(f"moment check needs q^n - 1 <= {max_order}", "moment_max_order", max_order)
    catalog = _catalog_for(ctx, d, catalog)
    dlog = dlog if dlog is not None else build_dlog(ctx, max_order)
    N = dlog.order
    m = moment_exponent(ctx.n, d)
    num = catalog.num_irreducibles
    T = all_T(catalog, dlog)
    lhs_float = float(np.sum(np.abs(T) ** (2 * m)))
    collisions = multiset_collisions(num, m)
    target = N * collisions
    rel = abs(lhs_float - target) / target
    bound = math.factorial(m) * num**m
    ok = rel <= FLOAT_RTOL and collisions <= bound
    lhs_exact = coll_group = None
    if exact:
        c = product_distribution(dlog.logs(catalog.irr_full_codes), N, m, backend)
        coll_group = int(sum(int(x) * int(x) for x in c.tolist()))
        lhs_exact = N * coll_group
        ok = ok and lhs_exact == target
    return MomentReport(
        q=ctx.q, n=ctx.n, d=d, m=m, num_irreducibles=num, lhs_float=lhs_float, lhs_exact=lhs_exact,
        collisions_group=coll_group, collisions_multiset=collisions, bound=bound, float_rel_error=rel,
        passed=bool(ok),
    )


# ---------------------------------------------------------------- representation counts


@dataclass(frozen=True, eq=False)
class RepCountVector:
    """counts[t] for the vertex gamma^t."""

    k: int
    m: int
    weighted: bool
    counts: np.ndarray
    expected_total: int

    @property
    def total(self) -> int:
        return int(sum(int(x) for x in self.counts.tolist()))

    @property
    def all_positive(self) -> bool:
        return bool(all(int(x) > 0 for x in self.counts.tolist()))

    def summary(self) -> dict:
        vals = [int(x) for x in self.counts.tolist()]
        return {
            "k": self.k,
            "m": self.m,
            "weighted": self.weighted,
            "min": min(vals),
            "max": max(vals),
            "mean": float(Fraction(self.total, len(vals))),
            "total": self.total,
            "expected_total": self.expected_total,
            "all_positive": self.all_positive,
        }

    def max_deviation_ok(self, bound_squared: int) -> bool:
        """max_v |counts(v) - total/N| <= sqrt(bound_squared), decided exactly."""
        N = self.counts.size
        total = self.total
        worst = max(abs(N * int(x) - total) for x in self.counts.tolist())
        return worst * worst <= N * N * bound_squared

    def max_deviation(self) -> float:
        N = self.counts.size
        total = self.total
        return max(float(Fraction(abs(N * int(x) - total), N)) for x in self.counts.tolist())


def _convolve(N, stages, exact_total, backend):
    vec = np.zeros(N, dtype=np.int64)
    vec[0] = 1
    if exact_total >= _INT64_SAFE:
        vec = vec.astype(object)
    for exps, weights, times in stages:
        for _ in range(times):
            vec = kernels.conv_step(vec, exps, weights, backend=backend)
    return vec


def _grouped(logs, weights):
    uniq, inv = np.unique(logs, return_inverse=True)
    w = np.zeros(uniq.size, dtype=object)
    for i, x in zip(inv.tolist(), np.asarray(weights).tolist()):
        w[i] += int(x)
    return uniq, w


def rep_count_Mk(
    ctx: FieldContext, d: int, k: int, max_order: int = DEFAULT_MAX_ORDER, catalog: PolyCatalog | None = None,
    dlog: DlogTable | None = None, backend: str | None = None,
) -> RepCountVector:
    """Lambda-weighted counts of v = g_1..g_{k-2m}(alpha) h_1..h_{2m}(alpha), g in P_d, h in I_d."""
    catalog = _catalog_for(ctx, d, catalog)
    m = moment_exponent(ctx.n, d)
    if k <= 2 * m:
        raise PreconditionError(f"M_k needs k > 2m = {2 * m}")
    dlog = dlog if dlog is not None else build_dlog(ctx, max_order)
    q, num = ctx.q, catalog.num_irreducibles
    total = q ** (d * (k - 2 * m)) * num ** (2 * m)
    pe, pw = _grouped(dlog.logs(catalog.pp_codes), catalog.pp_lambda)
    ie, iw = _grouped(dlog.logs(catalog.irr_full_codes), np.ones(num, dtype=np.int64))
    vec = _convolve(dlog.order, [(ie, iw, 2 * m), (pe, pw, k - 2 * m)], total, backend)
    return RepCountVector(k, m, True, vec, total)


def rep_count_Nk(
    ctx: FieldContext, k: int, max_order: int = DEFAULT_MAX_ORDER, dlog: DlogTable | None = None,
    backend: str | None = None,
) -> RepCountVector:
    """Counts of (u_1, ..., u_k) in F_q^k with prod (u_i + alpha) = v."""
    if k < 1:
        raise PreconditionError("k must be positive")
    if ctx.n < 2:
        raise PreconditionError("u + alpha is nonzero only when n >= 2")
    dlog = dlog if dlog is not None else build_dlog(ctx, max_order)
    q = ctx.q
    codes = np.arange(q, dtype=np.int64) + q  # u + alpha
    le, lw = _grouped(dlog.logs(codes), np.ones(q, dtype=np.int64))
    vec = _convolve(dlog.order, [(le, lw, k)], q**k, backend)
    return RepCountVector(k, ctx.n - 1, False, vec, q**k)


def mk_deviation_bound_squared(q: int, n: int, d: int, k: int, num_irreducibles: int) -> int:
    """Square of m! (n-1)^(k-2m) q^(d(k/2-m)) (#I_d)^m."""
    m = moment_exponent(n, d)
    if k < 2 * m:
        raise PreconditionError("deviation bound needs k >= 2m")
    c = math.factorial(m) * (n - 1) ** (k - 2 * m) * num_irreducibles**m
    return c * c * q ** (d * (k - 2 * m))


def nk_deviation_bound_squared(q: int, n: int, k: int) -> int:
    """Square of (n-1)! (n-1)^(k-2n+2) q^(k/2)."""
    if k < 2 * (n - 1):
        raise PreconditionError("deviation bound needs k >= 2(n-1)")
    c = math.factorial(n - 1) * (n - 1) ** (k - 2 * n + 2)
    return c * c * q**k


# ---------------------------------------------------------------- group-structure checks


def orthogonality_residual(ctx: FieldContext, dlog: DlogTable) -> float:
    """max_j |sum_{x != 0} chi_j(x) - [j = 0] (q^n - 1)|, summing over field elements."""
    N = dlog.order
    logs = dlog.logs(np.arange(1, N + 1))
    worst = 0.0
    rows = max(1, (1 << 20) // N)
    for lo in range(0, N, rows):
        js = np.arange(lo, min(N, lo + rows))
        sums = np.exp(2j * np.pi * ((js[:, None] * logs[None, :]) % N) / N).sum(axis=1)
        sums[js == 0] -= N
        worst = max(worst, float(np.abs(sums).max()))
    return worst


@njit(cache=True)
def _mult_residual_nb(lx, ly, lxy, N, re, im):
    worst = 0.0
    for r in range(lx.shape[0]):
        # indices j*l mod N, advanced incrementally over j
        a = 0
        b = 0
        c = 0
        for j in range(N):
            pr = re[b] * re[c] - im[b] * im[c]
            pi = re[b] * im[c] + im[b] * re[c]
            dr = re[a] - pr
            di = im[a] - pi
            v = dr * dr + di * di
            if v > worst:
                worst = v
            a += lxy[r]
            if a >= N:
                a -= N
            b += lx[r]
            if b >= N:
                b -= N
            c += ly[r]
            if c >= N:
                c -= N
    return np.sqrt(worst)


def _mult_residual_np(lx, ly, lxy, N, re, im):
    roots = re + 1j * im
    worst = 0.0
    for j in range(N):
        diff = roots[(j * lxy) % N] - roots[(j * lx) % N] * roots[(j * ly) % N]
        worst = max(worst, float(np.abs(diff).max()))
    return worst


def multiplicativity_residual(ctx: FieldContext, dlog: DlogTable, backend: str | None = None) -> float:
    """max over all j and all pairs x, y of |chi_j(xy) - chi_j(x) chi_j(y)|.

    Products xy come from polynomial multiplication mod f, not from the table.
    """
    N = dlog.order
    codes = np.arange(1, N + 1, dtype=np.int64)
    # x*y and y*x are the same check, so unordered pairs x <= y suffice
    ix, iy = np.triu_indices(N)
    rows = kernels.codes_to_rows(codes, ctx.q, ctx.n)
    add_tab, mul_tab, negf = ctx.kernel_tables()
    prod = kernels.rows_to_codes(kernels.mul_rows(rows[ix], rows[iy], add_tab, mul_tab, negf, backend=backend), ctx.q)
    logs = dlog.logs(codes)
    lx, ly, lxy = logs[ix], logs[iy], dlog.logs(prod)
    angles = 2 * np.pi * np.arange(N) / N
    re, im = np.cos(angles), np.sin(angles)
    if resolve_backend(backend) == "numba":
        return float(_mult_residual_nb(lx, ly, lxy, N, re, im))
    return _mult_residual_np(lx, ly, lxy, N, re, im)
