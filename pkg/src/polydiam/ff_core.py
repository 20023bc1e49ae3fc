"""Exact arithmetic in F_q (q = p^s) and in the extension F_q[X]/(f).

Base-field elements are plain integers in ``[0, q)``. For ``s > 1`` the code
of ``c_0 + c_1 Y + ... + c_{s-1} Y^{s-1}`` (with Y a root of the base modulus)
is ``sum(c_i * p**i)``.  Polynomials over F_q are :class:`FqPoly` tuples of
base codes in ascending degree; extension elements are :class:`ExtElem`
residues of degree < n, coded as ``sum(c_i * q**i)``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import sympy

from .errors import DomainError, PreconditionError, ResourceError

# Dense q x q lookup tables are built for the extension kernels up to this q.
MAX_TABLE_Q = 4096


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, s)`` with ``q == p**s``; raise DomainError otherwise."""
    if q < 2:
        raise DomainError(f"q={q} is not a prime power")
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise DomainError(f"q={q} is not a prime power")
    ((p, s),) = factors.items()
    return int(p), int(s)


# ---------------------------------------------------------------- polynomials


@dataclass(frozen=True)
class FqPoly:
    """Polynomial over F_q, coefficients in ascending degree, no trailing zeros."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def to_string(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    @classmethod
    def parse(cls, text: str) -> "FqPoly":
        parts = [t.strip() for t in text.strip().split(",")]
        try:
            return cls(tuple(int(t) for t in parts if t != ""))
        except ValueError:
            raise DomainError(f"bad polynomial string {text!r}; expected comma-separated integers") from None

    @classmethod
    def monic_from_code(cls, code: int, degree: int, q: int) -> "FqPoly":
        """Monic polynomial whose lower coefficients are the base-q digits of ``code``."""
        digits = []
        for _ in range(degree):
            code, r = divmod(code, q)
            digits.append(r)
        return cls(tuple(digits) + (1,))

    def lower_code(self, q: int) -> int:
        """Inverse of :meth:`monic_from_code`."""
        return sum(c * q**i for i, c in enumerate(self.coeffs[:-1]))

    def full_code(self, q: int) -> int:
        return sum(c * q**i for i, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)


# ---------------------------------------------------------------- base field


def _fp_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    s = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for deg in range(len(prod) - 1, s - 1, -1):
        t = prod[deg]
        if t:
            for i in range(s + 1):
                prod[deg - s + i] = (prod[deg - s + i] - t * mod[i]) % p
    return (prod + [0] * s)[:s]


@dataclass(frozen=True)
class FieldParams:
    """The base field F_q with q = p^s.

    ``base_modulus`` (monic irreducible of degree s over F_p, ascending
    coefficients) is required when s > 1; if omitted, the first one in code
    order is chosen.
    """

    p: int
    s: int = 1
    base_modulus: tuple[int, ...] | None = None
    _log: np.ndarray | None = field(default=None, repr=False, compare=False)
    _exp: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not sympy.isprime(self.p):
            raise DomainError(f"p={self.p} is not prime")
        if self.s < 1:
            raise DomainError("s must be a positive integer")
        if self.s == 1:
            if self.base_modulus is not None:
                raise DomainError("base_modulus only applies when s > 1")
            return
        if self.base_modulus is None:
            mod = first_irreducible(FieldParams(self.p), self.s)
        else:
            mod = FqPoly(tuple(self.base_modulus))
            if mod.degree != self.s or not mod.is_monic or any(c >= self.p for c in mod.coeffs):
                raise DomainError(f"base modulus must be monic of degree {self.s} over F_{self.p}")
            if not irreducibility_test(mod, FieldParams(self.p)):
                raise DomainError(f"base modulus {mod.to_string()} is reducible over F_{self.p}")
        object.__setattr__(self, "base_modulus", mod.coeffs)
        log, exp = self._build_log_exp()
        object.__setattr__(self, "_log", log)
        object.__setattr__(self, "_exp", exp)

    @classmethod
    def from_q(cls, q: int, base_modulus: Sequence[int] | None = None) -> "FieldParams":
        p, s = prime_power(q)
        return cls(p, s, tuple(base_modulus) if base_modulus is not None else None)

    @property
    def q(self) -> int:
        return self.p**self.s

    # log/antilog tables over a primitive element of F_q (s > 1 only)
    def _build_log_exp(self):
        p, s, q = self.p, self.s, self.p**self.s
        mod = self.base_modulus

        def digits(code):
            return [(code // p**i) % p for i in range(s)]

        def code_of(d):
            return sum(c * p**i for i, c in enumerate(d))

        for cand in range(2, q):
            g = digits(cand)
            exp = np.empty(q - 1, dtype=np.int64)
            cur = [1] + [0] * (s - 1)
            ok = True
            for t in range(q - 1):
                c = code_of(cur)
                if t > 0 and c == 1:
                    ok = False
                    break
                exp[t] = c
                cur = _fp_mulmod(cur, g, mod, p)
            if ok:
                log = np.full(q, -1, dtype=np.int64)
                log[exp] = np.arange(q - 1)
                return log, exp
        raise AssertionError("no primitive element found; base modulus is not irreducible")

    def add(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a + b) % self.p
        p = self.p
        out, place = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a: int) -> int:
        if self.s == 1:
            return (-a) % self.p
        p = self.p
        out, place = 0, 1
        while a:
            out += ((-(a % p)) % p) * place
            a //= p
            place *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise DomainError("inverse of zero in F_q")
        if self.s == 1:
            return pow(a, -1, self.p)
        return int(self._exp[(-self._log[a]) % (self.q - 1)])

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense ``(add_tab, mul_tab)`` arrays of shape (q, q)."""
        return _base_tables(self)


@functools.lru_cache(maxsize=32)
def _base_tables(F: FieldParams):
    q = F.q
    if q > MAX_TABLE_Q:
        raise ResourceError(
            f"base field of size {q} exceeds the lookup-table cap {MAX_TABLE_Q}", "max_table_q", MAX_TABLE_Q
        )
    codes = np.arange(q, dtype=np.int64)
    if F.s == 1:
        add_tab = (codes[:, None] + codes[None, :]) % q
        mul_tab = (codes[:, None] * codes[None, :]) % q
        return add_tab, mul_tab
    p = F.p
    add_tab = np.zeros((q, q), dtype=np.int64)
    for i in range(F.s):
        da = (codes // p**i) % p
        add_tab += ((da[:, None] + da[None, :]) % p) * p**i
    log = F._log
    logsum = (log[:, None] + log[None, :]) % (q - 1)
    mul_tab = F._exp[logsum]
    mul_tab[0, :] = 0
    mul_tab[:, 0] = 0
    return add_tab, mul_tab


def base_add(a: int, b: int, params: FieldParams) -> int:
    return params.add(a, b)


def base_mul(a: int, b: int, params: FieldParams) -> int:
    return params.mul(a, b)


def base_inv(a: int, params: FieldParams) -> int:
    return params.inv(a)


# ---------------------------------------------------------------- F_q[X]


def poly_add(F: FieldParams, a: FqPoly, b: FqPoly) -> FqPoly:
    n = max(len(a.coeffs), len(b.coeffs))
    return FqPoly(tuple(F.add(a[i], b[i]) for i in range(n)))


def poly_sub(F: FieldParams, a: FqPoly, b: FqPoly) -> FqPoly:
    n = max(len(a.coeffs), len(b.coeffs))
    return FqPoly(tuple(F.sub(a[i], b[i]) for i in range(n)))


def poly_scale(F: FieldParams, a: FqPoly, c: int) -> FqPoly:
    return FqPoly(tuple(F.mul(x, c) for x in a.coeffs))


def poly_mul(F: FieldParams, a: FqPoly, b: FqPoly) -> FqPoly:
    if a.is_zero or b.is_zero:
        return FqPoly()
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return FqPoly(tuple(out))


def poly_divmod(F: FieldParams, a: FqPoly, b: FqPoly) -> tuple[FqPoly, FqPoly]:
    if b.is_zero:
        raise DomainError("polynomial division by zero")
    rem = list(a.coeffs)
    db = b.degree
    lead_inv = F.inv(b.coeffs[-1])
    quot = [0] * max(0, len(rem) - db)
    for deg in range(len(rem) - 1, db - 1, -1):
        t = rem[deg]
        if t == 0:
            continue
        t = F.mul(t, lead_inv)
        quot[deg - db] = t
        for i, c in enumerate(b.coeffs):
            rem[deg - db + i] = F.sub(rem[deg - db + i], F.mul(t, c))
    return FqPoly(tuple(quot)), FqPoly(tuple(rem))


def poly_mod(F: FieldParams, a: FqPoly, b: FqPoly) -> FqPoly:
    return poly_divmod(F, a, b)[1]


def poly_monic(F: FieldParams, a: FqPoly) -> FqPoly:
    if a.is_zero:
        return a
    return poly_scale(F, a, F.inv(a.coeffs[-1]))


def poly_gcd(F: FieldParams, a: FqPoly, b: FqPoly) -> FqPoly:
    while not b.is_zero:
        a, b = b, poly_mod(F, a, b)
    return poly_monic(F, a)


def poly_pow(F: FieldParams, a: FqPoly, e: int) -> FqPoly:
    result = FqPoly((1,))
    while e:
        if e & 1:
            result = poly_mul(F, result, a)
        a = poly_mul(F, a, a)
        e >>= 1
    return result


def poly_powmod(F: FieldParams, a: FqPoly, e: int, mod: FqPoly) -> FqPoly:
    result = FqPoly((1,))
    a = poly_mod(F, a, mod)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, a), mod)
        a = poly_mod(F, poly_mul(F, a, a), mod)
        e >>= 1
    return result


def irreducibility_test(g: FqPoly, params: FieldParams) -> bool:
    """Rabin's test: g of degree k is irreducible iff X^(q^k) = X mod g and
    gcd(X^(q^(k/l)) - X, g) = 1 for every prime l dividing k."""
    if not g.is_monic:
        raise PreconditionError(f"irreducibility_test expects a monic polynomial, got {g.to_string()}")
    k = g.degree
    if k < 1:
        raise PreconditionError("irreducibility_test expects degree >= 1")
    if k == 1:
        return True
    F, q = params, params.q
    x = FqPoly((0, 1))
    frob = [poly_mod(F, x, g)]  # frob[i] = X^(q^i) mod g
    for _ in range(k):
        frob.append(poly_powmod(F, frob[-1], q, g))
    if frob[k] != poly_mod(F, x, g):
        return False
    for ell in sympy.primefactors(k):
        h = poly_sub(F, frob[k // ell], x)
        if poly_gcd(F, h, g).degree != 0:
            return False
    return True


def first_irreducible(params: FieldParams, n: int) -> FqPoly:
    """The monic irreducible of degree n with the smallest lower-coefficient code."""
    q = params.q
    for code in range(q**n):
        g = FqPoly.monic_from_code(code, n, q)
        if (n == 1 or g.coeffs[0] != 0) and irreducibility_test(g, params):
            return g
    raise AssertionError(f"no irreducible polynomial of degree {n} over F_{q}")


# ---------------------------------------------------------------- extension


@dataclass(frozen=True)
class ExtElem:
    """Residue modulo f, coefficients (base codes) of degree < n, zero padded."""

    coeffs: tuple[int, ...]

    def code(self, q: int) -> int:
        return sum(c * q**i for i, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        return str(FqPoly(self.coeffs)).replace("X", "a")


@dataclass(frozen=True)
class FieldContext:
    """F_{q^n} = F_q[X]/(f), with alpha the class of X."""

    params: FieldParams
    modulus: FqPoly

    def __post_init__(self):
        f = self.modulus
        if not f.is_monic or f.degree < 1:
            raise DomainError("modulus must be monic of degree >= 1")
        if any(c >= self.params.q for c in f.coeffs):
            raise DomainError("modulus coefficients must be base-field codes < q")
        if not irreducibility_test(f, self.params):
            raise DomainError(f"modulus {f.to_string()} is reducible over F_{self.params.q}")

    @classmethod
    def create(
        cls,
        q: int,
        n: int,
        modulus: FqPoly | str | None = None,
        base_modulus: Sequence[int] | str | None = None,
    ) -> "FieldContext":
        if isinstance(base_modulus, str):
            base_modulus = FqPoly.parse(base_modulus).coeffs
        params = FieldParams.from_q(q, base_modulus)
        if isinstance(modulus, str):
            modulus = FqPoly.parse(modulus)
        if modulus is None:
            modulus = first_irreducible(params, n)
        elif modulus.degree != n:
            raise DomainError(f"modulus has degree {modulus.degree}, expected n={n}")
        return cls(params, modulus)

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def n(self) -> int:
        return self.modulus.degree

    @property
    def order(self) -> int:
        """Size of the multiplicative group, q^n - 1."""
        return self.q**self.n - 1

    def element(self, coeffs: Iterable[int]) -> ExtElem:
        c = list(coeffs)
        if len(c) > self.n:
            return ext_reduce(FqPoly(tuple(c)), self)
        return ExtElem(tuple(c) + (0,) * (self.n - len(c)))

    def from_code(self, code: int) -> ExtElem:
        q = self.q
        digits = []
        for _ in range(self.n):
            code, r = divmod(code, q)
            digits.append(r)
        return ExtElem(tuple(digits))

    def code(self, a: ExtElem) -> int:
        return a.code(self.q)

    @property
    def zero(self) -> ExtElem:
        return ExtElem((0,) * self.n)

    @property
    def one(self) -> ExtElem:
        return self.element([1])

    @property
    def alpha(self) -> ExtElem:
        return self.element([0, 1])

    def add(self, a: ExtElem, b: ExtElem) -> ExtElem:
        return ext_add(a, b, self)

    def mul(self, a: ExtElem, b: ExtElem) -> ExtElem:
        return ext_mul(a, b, self)

    def inv(self, a: ExtElem) -> ExtElem:
        return ext_inv(a, self)

    def pow(self, a: ExtElem, e: int) -> ExtElem:
        if e < 0:
            a, e = ext_inv(a, self), -e
        result = self.one
        while e:
            if e & 1:
                result = ext_mul(result, a, self)
            a = ext_mul(a, a, self)
            e >>= 1
        return result

    def kernel_tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(add_tab, mul_tab, negf)`` for the array kernels."""
        return _kernel_tables(self)


@functools.lru_cache(maxsize=32)
def _kernel_tables(ctx: FieldContext):
    add_tab, mul_tab = ctx.params.tables()
    F = ctx.params
    negf = np.array([F.neg(ctx.modulus[i]) for i in range(ctx.n)], dtype=np.int64)
    return add_tab, mul_tab, negf


def ext_reduce(g: FqPoly, ctx: FieldContext) -> ExtElem:
    r = poly_mod(ctx.params, g, ctx.modulus)
    return ExtElem(r.coeffs + (0,) * (ctx.n - len(r.coeffs)))


def ext_add(a: ExtElem, b: ExtElem, ctx: FieldContext) -> ExtElem:
    F = ctx.params
    return ExtElem(tuple(F.add(x, y) for x, y in zip(a.coeffs, b.coeffs)))


def ext_mul(a: ExtElem, b: ExtElem, ctx: FieldContext) -> ExtElem:
    return ext_reduce(poly_mul(ctx.params, FqPoly(a.coeffs), FqPoly(b.coeffs)), ctx)


def ext_inv(a: ExtElem, ctx: FieldContext) -> ExtElem:
    """Inverse via the extended Euclidean algorithm on (a, f)."""
    F = ctx.params
    r0, r1 = ctx.modulus, FqPoly(a.coeffs)
    if r1.is_zero:
        raise DomainError("inverse of zero in F_{q^n}")
    t0, t1 = FqPoly(), FqPoly((1,))
    while not r1.is_zero:
        quot, rem = poly_divmod(F, r0, r1)
        r0, r1 = r1, rem
        t0, t1 = t1, poly_sub(F, t0, poly_mul(F, quot, t1))
    # r0 is a nonzero constant because f is irreducible
    return ext_reduce(poly_scale(F, t0, F.inv(r0.coeffs[0])), ctx)


def evaluate_at_alpha(g: FqPoly, ctx: FieldContext) -> ExtElem:
    """g(alpha) for deg g < n, i.e. g read as a residue modulo f."""
    if g.degree >= ctx.n:
        raise PreconditionError(f"evaluate_at_alpha needs deg g < n={ctx.n}, got {g.degree}")
    return ExtElem(g.coeffs + (0,) * (ctx.n - len(g.coeffs)))
