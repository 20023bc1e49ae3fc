"""Backend selection for the numeric kernels.

Setting ``POLYDIAM_DISABLE_NUMBA=1`` in the environment forces the pure-numpy
fallback paths even when numba is importable.
"""
from __future__ import annotations

import functools
import os

_DISABLED = os.environ.get("POLYDIAM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by POLYDIAM_DISABLE_NUMBA")
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        # Bare use (@njit) and configured use (@njit(cache=True)) both pass through.
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(f):
            @functools.wraps(f)
            def wrapper(*a, **kw):
                return f(*a, **kw)

            return wrapper

        return decorator


DEFAULT_BACKEND = "numba" if NUMBA_AVAILABLE else "numpy"


def resolve_backend(backend: str | None) -> str:
    if backend is None:
        return DEFAULT_BACKEND
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is unavailable or disabled")
    return backend


__all__ = ["njit", "NUMBA_AVAILABLE", "DEFAULT_BACKEND", "resolve_backend"]
