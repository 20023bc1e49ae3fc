"""Irreducible and prime-power polynomial catalogs with von Mangoldt weights."""
from __future__ import annotations

import functools
import os
from dataclasses import dataclass

import numpy as np
import sympy

from . import kernels
from .errors import ConsistencyError, ResourceError
from .ff_core import FieldParams, FqPoly, poly_pow

DEFAULT_ENUM_CAP = int(os.environ.get("POLYDIAM_MAX_ENUM", 10**7))


def moebius(s: int) -> int:
    if s < 1:
        raise ValueError("moebius is defined for positive integers")
    factors = sympy.factorint(s)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def count_irreducibles(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q, by Moebius inversion."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    total = sum(moebius(s) * q ** (d // s) for s in sympy.divisors(d))
    count, rem = divmod(total, d)
    if rem:
        raise ConsistencyError(f"Moebius sum {total} not divisible by d={d}")
    return count


def count_prime_powers(q: int, d: int) -> int:
    return sum(count_irreducibles(q, e) for e in sympy.divisors(d))


def _check_cap(q: int, d: int, cap: int):
    if q**d > cap:
        raise ResourceError(
            f"enumerating degree-{d} polynomials over F_{q} needs {q**d} candidates, above the cap {cap}",
            "max_enum",
            cap,
        )


@functools.lru_cache(maxsize=256)
def _irreducible_codes(params: FieldParams, d: int, backend: str | None) -> np.ndarray:
    q = params.q
    if d == 1:
        return np.arange(q, dtype=np.int64)
    factor_codes, factor_degs = [], []
    for a in range(1, d // 2 + 1):
        codes = _irreducible_codes(params, a, backend)
        factor_codes.append(codes)
        factor_degs.append(np.full(codes.size, a, dtype=np.int64))
    add_tab, mul_tab = params.tables()
    reducible = kernels.sieve_reducible(
        q, d, np.concatenate(factor_codes), np.concatenate(factor_degs), add_tab, mul_tab, backend=backend
    )
    codes = np.flatnonzero(~reducible).astype(np.int64)
    codes.flags.writeable = False
    return codes


def irreducible_codes(params: FieldParams, d: int, cap: int = DEFAULT_ENUM_CAP, backend: str | None = None) -> np.ndarray:
    """Lower-coefficient codes of I_d in increasing order (see FqPoly.monic_from_code)."""
    _check_cap(params.q, d, cap)
    return _irreducible_codes(params, d, backend)


def enumerate_irreducibles(params: FieldParams, d: int, cap: int = DEFAULT_ENUM_CAP) -> list[FqPoly]:
    q = params.q
    return [FqPoly.monic_from_code(int(c), d, q) for c in irreducible_codes(params, d, cap)]


@dataclass(frozen=True)
class WeightedPoly:
    poly: FqPoly
    base: FqPoly
    k: int
    lam: int


@dataclass(frozen=True, eq=False)
class PolyCatalog:
    """I_d and P_d over F_q as parallel integer arrays.

    ``pp_codes`` holds the full code ``sum(c_i q^i)`` of each prime power
    (leading 1 included), which is also the code of its residue mod f
    whenever d < n.
    """

    params: FieldParams
    d: int
    irr_codes: np.ndarray
    pp_codes: np.ndarray
    pp_base_codes: np.ndarray
    pp_base_degs: np.ndarray
    pp_k: np.ndarray
    pp_lambda: np.ndarray

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def irr_full_codes(self) -> np.ndarray:
        return self.irr_codes + self.q**self.d

    @property
    def num_irreducibles(self) -> int:
        return int(self.irr_codes.size)

    @property
    def num_prime_powers(self) -> int:
        return int(self.pp_codes.size)

    @property
    def irreducibles(self) -> list[FqPoly]:
        return [FqPoly.monic_from_code(int(c), self.d, self.q) for c in self.irr_codes]

    @property
    def prime_powers(self) -> list[WeightedPoly]:
        q, out = self.q, []
        for code, bcode, e, k, lam in zip(
            self.pp_codes.tolist(), self.pp_base_codes.tolist(), self.pp_base_degs.tolist(),
            self.pp_k.tolist(), self.pp_lambda.tolist(),
        ):
            poly = FqPoly.monic_from_code(code - q**self.d, self.d, q)
            out.append(WeightedPoly(poly, FqPoly.monic_from_code(bcode, e, q), k, lam))
        return out


def build_catalog(params: FieldParams, d: int, cap: int = DEFAULT_ENUM_CAP, backend: str | None = None) -> PolyCatalog:
    q = params.q
    irr = irreducible_codes(params, d, cap, backend)
    codes, bases, degs, ks = [], [], [], []
    for e in sympy.divisors(d):
        k = d // e
        base = irreducible_codes(params, e, cap, backend)
        if k == 1:
            full = base + q**e
        else:
            full = np.array(
                [poly_pow(params, FqPoly.monic_from_code(int(c), e, q), k).full_code(q) for c in base],
                dtype=np.int64,
            )
        codes.append(full)
        bases.append(base)
        degs.append(np.full(base.size, e, dtype=np.int64))
        ks.append(np.full(base.size, k, dtype=np.int64))
    pp_degs = np.concatenate(degs)
    return PolyCatalog(
        params=params,
        d=d,
        irr_codes=irr,
        pp_codes=np.concatenate(codes),
        pp_base_codes=np.concatenate(bases),
        pp_base_degs=pp_degs,
        pp_k=np.concatenate(ks),
        pp_lambda=pp_degs.copy(),
    )


def enumerate_prime_powers(params: FieldParams, d: int, cap: int = DEFAULT_ENUM_CAP) -> list[WeightedPoly]:
    """P_d ordered by base degree, then base code; entries carry Lambda = deg h."""
    return build_catalog(params, d, cap).prime_powers
