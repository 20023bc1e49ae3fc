"""The Cayley digraph on F_{q^n}^* generated by E(alpha, d) = {g(alpha) : g in P_d}.

Edges are u -> v iff u/v lies in E. Right multiplication by any group element
is an automorphism, so the diameter is the largest distance from the identity,
and the BFS runs on exponents: with a primitive gamma every vertex is gamma^t
and multiplying by a generator e adds log(e) modulo q^n - 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from . import kernels
from .dlog import DEFAULT_MAX_ORDER, DlogTable, build_dlog
from .errors import PreconditionError
from .ff_core import ExtElem, FieldContext, ext_inv
from .poly_enum import DEFAULT_ENUM_CAP, PolyCatalog, WeightedPoly, build_catalog

ORACLE_MAX_SIZE = 512


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """Distinct generator values with multiplicities and Lambda totals.

    ``codes`` are residue codes of the distinct values (sorted), ``source_index``
    maps each catalog prime power to its row in ``codes``.
    """

    ctx: FieldContext
    d: int
    codes: np.ndarray
    multiplicity: np.ndarray
    total_lambda: np.ndarray
    catalog: PolyCatalog | None = field(default=None, repr=False)
    source_index: np.ndarray | None = field(default=None, repr=False)

    @property
    def distinct_count(self) -> int:
        return int(self.codes.size)

    @property
    def regularity(self) -> int:
        return int(self.multiplicity.sum())

    @property
    def values(self) -> list[ExtElem]:
        return [self.ctx.from_code(int(c)) for c in self.codes]

    def sources(self, i: int) -> list[WeightedPoly]:
        if self.catalog is None:
            return []
        pps = self.catalog.prime_powers
        return [pps[j] for j in np.flatnonzero(self.source_index == i)]

    @classmethod
    def from_values(cls, ctx: FieldContext, values: list[ExtElem]) -> "GeneratorSet":
        """Ad-hoc generator multiset, for experiments and tests."""
        codes = np.array([ctx.code(v) for v in values], dtype=np.int64)
        if (codes == 0).any():
            raise PreconditionError("generators must be nonzero")
        uniq, counts = np.unique(codes, return_counts=True)
        return cls(ctx, 0, uniq, counts, counts.copy())


def build_generators(ctx: FieldContext, d: int, cap: int = DEFAULT_ENUM_CAP, catalog: PolyCatalog | None = None) -> GeneratorSet:
    if not 1 <= d < ctx.n:
        raise PreconditionError(f"need 1 <= d < n (d={d}, n={ctx.n}); for d >= n zero may enter E")
    if catalog is None:
        catalog = build_catalog(ctx.params, d, cap)
    # deg g = d < n, so g is already reduced: its residue code is its full code
    uniq, inverse, counts = np.unique(catalog.pp_codes, return_inverse=True, return_counts=True)
    lam = np.bincount(inverse, weights=catalog.pp_lambda, minlength=uniq.size).astype(np.int64)
    return GeneratorSet(ctx, d, uniq, counts, lam, catalog, inverse)


@dataclass(frozen=True, eq=False)
class DiameterResult:
    q: int
    n: int
    d: int
    modulus: str
    connected: bool
    diameter: int | None
    histogram: dict[int, int]
    eccentric_vertex: ExtElem | None
    convention: str
    distinct_generators: int
    regularity: int
    witness: ExtElem | None = None
    distances: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "d": self.d,
            "f": self.modulus,
            "connected": self.connected,
            "diameter": self.diameter,
            "distance_histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "eccentric_vertex": list(self.eccentric_vertex.coeffs) if self.eccentric_vertex else None,
            "convention": self.convention,
            "distinct_generators": self.distinct_generators,
            "regularity": self.regularity,
            "witness": list(self.witness.coeffs) if self.witness else None,
        }


CONVENTIONS = {"mul": "v -> v*e", "div": "v -> v/e"}


def bfs_from_identity(
    gens: GeneratorSet,
    ctx: FieldContext,
    convention: str = "mul",
    dlog: DlogTable | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
    backend: str | None = None,
) -> DiameterResult:
    """Exact diameter by one BFS from the identity.

    ``convention="mul"`` steps v -> v*e (distance from v to 1 along the
    edges), ``"div"`` steps v -> v/e (distance from 1 to v). Both give the
    diameter by vertex-transitivity.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {sorted(CONVENTIONS)}")
    if dlog is None:
        dlog = build_dlog(ctx, max_order, backend)
    N = dlog.order
    steps = dlog.logs(gens.codes)
    if convention == "div":
        steps = (-steps) % N
    dist = kernels.bfs_cyclic(N, steps, backend=backend)
    unreached = np.flatnonzero(dist < 0)
    connected = unreached.size == 0
    reached = dist[dist >= 0]
    hist = {int(k): int(v) for k, v in enumerate(np.bincount(reached)) if v}
    if connected:
        far = int(np.argmax(dist))
        diameter = int(dist[far])
        ecc = dlog.exp_of(far)
        witness = None
    else:
        diameter, ecc = None, None
        witness = dlog.exp_of(int(unreached[0]))
    return DiameterResult(
        q=ctx.q,
        n=ctx.n,
        d=gens.d,
        modulus=ctx.modulus.to_string(),
        connected=connected,
        diameter=diameter,
        histogram=hist,
        eccentric_vertex=ecc,
        convention=CONVENTIONS[convention],
        distinct_generators=gens.distinct_count,
        regularity=gens.regularity,
        witness=witness,
        distances=dist,
    )


def explicit_out_neighbours(gens: GeneratorSet, ctx: FieldContext) -> np.ndarray:
    """Matrix ``nbr[u_code - 1, i]``: the code of v with u/v = e_i.

    Built from extended-Euclid inverses and row-wise polynomial products mod f,
    with no use of discrete logarithms.
    """
    size = ctx.q**ctx.n
    if size > ORACLE_MAX_SIZE:
        raise PreconditionError(f"explicit graph limited to q^n <= {ORACLE_MAX_SIZE}, got {size}")
    inverses = np.array([ext_inv(e, ctx).coeffs for e in gens.values], dtype=np.int64)
    add_tab, mul_tab, negf = ctx.kernel_tables()
    us = kernels.codes_to_rows(np.arange(1, size), ctx.q, ctx.n)
    nbr = np.empty((size - 1, len(inverses)), dtype=np.int64)
    for i, einv in enumerate(inverses):
        prod = kernels.mul_rows(us, einv, add_tab, mul_tab, negf, backend="numpy")
        nbr[:, i] = kernels.rows_to_codes(prod, ctx.q)
    return nbr


def all_pairs_diameter_oracle(gens: GeneratorSet, ctx: FieldContext) -> int | None:
    """Diameter from BFS out of every vertex of the explicit graph; None if not strongly connected."""
    nbr = explicit_out_neighbours(gens, ctx)
    V = nbr.shape[0]
    rows = np.repeat(np.arange(V), nbr.shape[1])
    adj = csr_matrix((np.ones(rows.size), (rows, nbr.ravel() - 1)), shape=(V, V))
    dist = shortest_path(adj, method="D", directed=True, unweighted=True)
    if np.isinf(dist).any():
        return None
    return int(dist.max())


def connectivity_check(
    ctx: FieldContext, d: int, max_order: int = DEFAULT_MAX_ORDER, gens: GeneratorSet | None = None
) -> tuple[bool, ExtElem | None]:
    """Whether the BFS reaches every vertex, with an unreached element otherwise."""
    if gens is None:
        gens = build_generators(ctx, d)
    res = bfs_from_identity(gens, ctx, max_order=max_order)
    return res.connected, res.witness


def diameter(ctx: FieldContext, d: int, max_order: int = DEFAULT_MAX_ORDER, backend: str | None = None) -> DiameterResult:
    gens = build_generators(ctx, d)
    return bfs_from_identity(gens, ctx, max_order=max_order, backend=backend)
