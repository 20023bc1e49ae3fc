"""Closed-form diameter bounds, their preconditions, and the asymptotic constants.

All logarithms are natural. A bound whose hypothesis fails evaluates to
``None`` ("not applicable") rather than raising, so sweeps can run across
boundary cells.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

from .errors import DomainError


def moment_m(n: int, d: int) -> int:
    return -(-n // d) - 1


def below_weil_range(q: int, n: int, d: int) -> bool:
    """n < q^(d/2) + 1, decided in integers as (n - 1)^2 < q^d."""
    return n >= 1 and (n - 1) ** 2 < q**d


def bound_lwwz(q: int, n: int, d: int) -> float | None:
    """(2n/d)(1 + 2 log(n-1) / (d log q - 2 log(n-1))) + 1, for 2 <= n < q^(d/2) + 1."""
    if d < 1 or n < 2 or not below_weil_range(q, n, d):
        return None
    L = math.log(n - 1)
    denom = d * math.log(q) - 2 * L
    return (2 * n / d) * (1 + 2 * L / denom) + 1


def bound_thm1(q: int, n: int, d: int) -> float | None:
    """Improved bound for d >= 2 and 2d + 1 <= n < q^(d/2) + 1."""
    if d < 2 or n < 2 * d + 1 or not below_weil_range(q, n, d):
        return None
    log_n1 = math.log(n - 1)
    gap = d * math.log(q) - 2 * log_n1
    main = (2 * n / d) * (1 + (log_n1 - 1) / gap)
    return main + (4 * log_n1 + 7) / gap


def bound_thm2(q: int, n: int) -> float | None:
    """Improved bound for d = 1 and 3 <= n < q^(1/2) + 1."""
    if n < 3 or (n - 1) ** 2 >= q:
        return None
    ln_q = math.log(q)
    ln_n = math.log(n - 1)
    t = ln_q - 2 * ln_n
    return 2 * n + 2 * n * (ln_n - 1) / t + 3 * (ln_n + 1) / t


def katz_cohen_threshold(n: int) -> int:
    return (n * math.factorial(n + 2)) ** 2


def katz_cohen_info(q: int, n: int) -> dict:
    """Delta(alpha) <= n + 2 once q >= (n (n+2)!)^2; informational only."""
    return {"applicable": q >= katz_cohen_threshold(n), "bound": n + 2, "threshold": katz_cohen_threshold(n)}


def asymptotic_constants(theta: float) -> dict:
    """Leading constants of D(alpha, d) d / n when n = q^(theta d + o(d))."""
    if not 0 < theta < 0.5:
        raise DomainError("theta must lie in the open interval (0, 1/2)")
    return {"improved": (2 - 2 * theta) / (1 - 2 * theta), "old": 2 / (1 - 2 * theta)}


def theta_of(q: int, n: int, d: int) -> float:
    return math.log(n) / (d * math.log(q))


@dataclass
class BoundReport:
    q: int
    n: int
    d: int
    m: int
    f: str | None = None
    bound_lwwz: float | None = None
    bound_thm1: float | None = None
    bound_thm2: float | None = None
    katz_cohen: dict = field(default_factory=dict)
    theta: float | None = None
    connected: bool | None = None
    exact_diameter: int | None = None
    distinct_generators: int | None = None
    regularity: int | None = None
    flags: dict | None = None
    runtime_ms: float | None = None

    @property
    def violated(self) -> bool:
        return bool(self.flags) and any(v == "violated" for v in self.flags.values())

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate_bounds(q: int, n: int, d: int) -> BoundReport:
    return BoundReport(
        q=q, n=n, d=d, m=moment_m(n, d),
        bound_lwwz=bound_lwwz(q, n, d),
        bound_thm1=bound_thm1(q, n, d),
        bound_thm2=bound_thm2(q, n) if d == 1 else None,
        katz_cohen=katz_cohen_info(q, n) if d == 1 else {"applicable": False, "bound": None},
        theta=theta_of(q, n, d) if n >= 1 and q > 1 else None,
    )


def compare(ctx, d: int, run_bfs: bool = True, max_order: int | None = None, backend: str | None = None) -> BoundReport:
    """All bounds for (ctx, d), optionally checked against the exact diameter.

    A bound is flagged "violated" when the exact diameter exceeds it; the
    graph being disconnected while any bound applies is also a violation.
    """
    from . import cayley
    from .dlog import DEFAULT_MAX_ORDER

    start = time.perf_counter()
    report = evaluate_bounds(ctx.q, ctx.n, d)
    report.f = ctx.modulus.to_string()
    if run_bfs:
        res = cayley.diameter(ctx, d, max_order=max_order or DEFAULT_MAX_ORDER, backend=backend)
        report.connected = res.connected
        report.exact_diameter = res.diameter
        report.distinct_generators = res.distinct_generators
        report.regularity = res.regularity
        flags = {}
        for name in ("bound_lwwz", "bound_thm1", "bound_thm2"):
            value = getattr(report, name)
            if value is None:
                flags[name] = "not applicable"
            elif not res.connected or res.diameter > value:
                flags[name] = "violated"
            else:
                flags[name] = "satisfied"
        report.flags = flags
    report.runtime_ms = (time.perf_counter() - start) * 1000
    return report
