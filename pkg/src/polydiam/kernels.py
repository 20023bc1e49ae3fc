"""Hot numeric kernels.

Every kernel comes in two flavours: an explicit-loop version compiled with
numba, and a vectorised numpy version. ``backend=None`` picks numba when it is
importable and not disabled through ``POLYDIAM_DISABLE_NUMBA``.

Field elements are handled as rows of base-field codes (ascending degree).
Base-field arithmetic goes through dense ``add_tab``/``mul_tab`` lookup
tables, so the same kernels serve prime and prime-power base fields.
Reduction modulo the monic modulus f uses ``negf[i] = -f_i``.
"""
from __future__ import annotations

import numpy as np
import scipy.fft

from ._accel import njit, resolve_backend

# Above this many edge relaxations a BFS switches to FFT sumset levels.
DENSE_BFS_THRESHOLD = {"numba": 200_000_000, "numpy": 50_000_000}
_CHUNK = 1 << 22


# ---------------------------------------------------------------- products


@njit(cache=True)
def _mul_into(a, b, add_tab, mul_tab, negf, buf, out):
    n = a.shape[0]
    for i in range(2 * n - 1):
        buf[i] = 0
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(n):
            bj = b[j]
            if bj != 0:
                buf[i + j] = add_tab[buf[i + j], mul_tab[ai, bj]]
    for deg in range(2 * n - 2, n - 1, -1):
        t = buf[deg]
        if t == 0:
            continue
        for i in range(n):
            buf[deg - n + i] = add_tab[buf[deg - n + i], mul_tab[t, negf[i]]]
    for i in range(n):
        out[i] = buf[i]


@njit(cache=True)
def _mul_rows_nb(A, B, add_tab, mul_tab, negf):
    M, n = A.shape
    out = np.empty((M, n), dtype=np.int64)
    buf = np.zeros(2 * n - 1, dtype=np.int64)
    single = B.shape[0] == 1
    for r in range(M):
        br = B[0] if single else B[r]
        _mul_into(A[r], br, add_tab, mul_tab, negf, buf, out[r])
    return out


def _mul_rows_np(A, B, add_tab, mul_tab, negf):
    M, n = A.shape
    B = np.broadcast_to(B, (M, n))
    buf = np.zeros((M, 2 * n - 1), dtype=np.int64)
    for i in range(n):
        ai = A[:, i]
        for j in range(n):
            buf[:, i + j] = add_tab[buf[:, i + j], mul_tab[ai, B[:, j]]]
    for deg in range(2 * n - 2, n - 1, -1):
        t = buf[:, deg]
        for i in range(n):
            buf[:, deg - n + i] = add_tab[buf[:, deg - n + i], mul_tab[t, negf[i]]]
    return np.ascontiguousarray(buf[:, :n])


def mul_rows(A, B, add_tab, mul_tab, negf, backend=None):
    """Row-wise product of extension elements; ``B`` may be a single row."""
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(np.atleast_2d(B), dtype=np.int64)
    if A.shape[0] == 0:
        return A.copy()
    if resolve_backend(backend) == "numba":
        return _mul_rows_nb(A, B, add_tab, mul_tab, negf)
    return _mul_rows_np(A, B, add_tab, mul_tab, negf)


@njit(cache=True)
def _powers_nb(g, count, add_tab, mul_tab, negf):
    n = g.shape[0]
    out = np.zeros((count, n), dtype=np.int64)
    out[0, 0] = 1
    buf = np.zeros(2 * n - 1, dtype=np.int64)
    for t in range(1, count):
        _mul_into(out[t - 1], g, add_tab, mul_tab, negf, buf, out[t])
    return out


def _powers_np(g, count, add_tab, mul_tab, negf):
    n = g.shape[0]
    out = np.zeros((count, n), dtype=np.int64)
    out[0, 0] = 1
    filled = 1
    step = g.reshape(1, n).copy()  # g ** filled
    while filled < count:
        take = min(filled, count - filled)
        out[filled:filled + take] = _mul_rows_np(out[:take], step, add_tab, mul_tab, negf)
        step = _mul_rows_np(step, step, add_tab, mul_tab, negf)
        filled += take
    return out


def powers(g, count, add_tab, mul_tab, negf, backend=None):
    """Rows ``g**0, g**1, ..., g**(count-1)``."""
    g = np.ascontiguousarray(g, dtype=np.int64)
    if resolve_backend(backend) == "numba":
        return _powers_nb(g, count, add_tab, mul_tab, negf)
    return _powers_np(g, count, add_tab, mul_tab, negf)


@njit(cache=True)
def _power_codes_nb(g, count, q, add_tab, mul_tab, negf):
    n = g.shape[0]
    codes = np.empty(count, dtype=np.int64)
    cur = np.zeros(n, dtype=np.int64)
    nxt = np.zeros(n, dtype=np.int64)
    cur[0] = 1
    buf = np.zeros(2 * n - 1, dtype=np.int64)
    for t in range(count):
        c = 0
        for i in range(n - 1, -1, -1):
            c = c * q + cur[i]
        codes[t] = c
        _mul_into(cur, g, add_tab, mul_tab, negf, buf, nxt)
        cur, nxt = nxt, cur
    return codes


def _power_codes_np(g, count, q, add_tab, mul_tab, negf, block=1 << 16):
    block = min(block, count)
    head = _powers_np(g, block, add_tab, mul_tab, negf)
    jump = _mul_rows_np(head[-1:], g.reshape(1, -1), add_tab, mul_tab, negf)  # g ** block
    codes = np.empty(count, dtype=np.int64)
    rows = head
    for lo in range(0, count, block):
        take = min(block, count - lo)
        codes[lo:lo + take] = rows_to_codes(rows[:take], q)
        if lo + block < count:
            rows = _mul_rows_np(rows, jump, add_tab, mul_tab, negf)
    return codes


def power_codes(g, count, q, add_tab, mul_tab, negf, backend=None):
    """Codes of ``g**0, ..., g**(count-1)`` without materialising all rows."""
    g = np.ascontiguousarray(g, dtype=np.int64)
    if resolve_backend(backend) == "numba":
        return _power_codes_nb(g, count, q, add_tab, mul_tab, negf)
    return _power_codes_np(g, count, q, add_tab, mul_tab, negf)


def rows_to_codes(rows, q):
    rows = np.asarray(rows, dtype=np.int64)
    weights = q ** np.arange(rows.shape[1], dtype=np.int64)
    return rows @ weights


def codes_to_rows(codes, q, width):
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty(codes.shape + (width,), dtype=np.int64)
    rest = codes.copy()
    for i in range(width):
        out[..., i] = rest % q
        rest //= q
    return out


# ---------------------------------------------------------------- BFS on Z_N


@njit(cache=True)
def _bfs_nb(N, steps):
    dist = np.full(N, -1, dtype=np.int32)
    queue = np.empty(N, dtype=np.int64)
    dist[0] = 0
    queue[0] = 0
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for s in steps:
            v = u + s
            if v >= N:
                v -= N
            if dist[v] < 0:
                dist[v] = du
                queue[tail] = v
                tail += 1
    return dist


def _bfs_np(N, steps):
    dist = np.full(N, -1, dtype=np.int32)
    dist[0] = 0
    frontier = np.array([0], dtype=np.int64)
    level = 0
    rows = max(1, _CHUNK // max(1, steps.size))
    while frontier.size:
        level += 1
        found = []
        for lo in range(0, frontier.size, rows):
            cand = (frontier[lo:lo + rows, None] + steps[None, :]) % N
            cand = cand.ravel()
            cand = np.unique(cand[dist[cand] < 0])
            dist[cand] = level
            found.append(cand)
        frontier = np.concatenate(found) if found else np.empty(0, dtype=np.int64)
    return dist


def _bfs_fft(N, steps):
    # cyclic convolution as a zero-padded linear one folded mod N, so the
    # transform length can be a fast size whatever N factors into
    size = scipy.fft.next_fast_len(2 * N - 1, real=True)
    dist = np.full(N, -1, dtype=np.int32)
    dist[0] = 0
    ind = np.zeros(N)
    ind[steps] = 1.0
    spectrum = scipy.fft.rfft(ind, size)
    frontier = np.zeros(N)
    frontier[0] = 1.0
    level = 0
    while True:
        level += 1
        lin = scipy.fft.irfft(scipy.fft.rfft(frontier, size) * spectrum, size)
        conv = lin[:N].copy()
        conv[: N - 1] += lin[N:2 * N - 1]
        new = (conv > 0.5) & (dist < 0)
        if not new.any():
            return dist
        dist[new] = level
        frontier = new.astype(np.float64)


def bfs_cyclic(N: int, steps, backend=None, dense_threshold: int | None = None):
    """Distances from 0 in the Cayley digraph of Z_N with edges t -> t + s.

    Unreached vertices get distance -1. Dense generator sets (many edges,
    few levels) go through FFT sumsets unless ``dense_threshold`` says otherwise.
    """
    backend = resolve_backend(backend)
    steps = np.unique(np.asarray(steps, dtype=np.int64) % N)
    if dense_threshold is None:
        dense_threshold = DENSE_BFS_THRESHOLD[backend]
    if N * steps.size > dense_threshold:
        return _bfs_fft(N, steps)
    if backend == "numba":
        return _bfs_nb(N, steps)
    return _bfs_np(N, steps)


# ---------------------------------------------------------------- convolution


@njit(cache=True)
def _conv_step_nb(vec, exps, weights):
    N = vec.shape[0]
    out = np.zeros(N, dtype=np.int64)
    for i in range(exps.shape[0]):
        e = exps[i]
        w = weights[i]
        for t in range(N):
            x = vec[t]
            if x != 0:
                s = t + e
                if s >= N:
                    s -= N
                out[s] += w * x
    return out


def _conv_step_np(vec, exps, weights):
    out = np.zeros_like(vec)
    for e, w in zip(exps.tolist(), weights.tolist()):
        out += w * np.roll(vec, e)
    return out


def conv_step(vec, exps, weights, backend=None):
    """One group-algebra multiplication on Z_N: ``out[t + e] += w * vec[t]``.

    Object-dtype vectors (Python integers) always take the numpy path.
    """
    exps = np.asarray(exps, dtype=np.int64) % vec.shape[0]
    if vec.dtype == object:
        return _conv_step_np(vec, exps, np.array([int(w) for w in weights], dtype=object))
    weights = np.asarray(weights, dtype=np.int64)
    if resolve_backend(backend) == "numba":
        return _conv_step_nb(vec, exps, weights)
    return _conv_step_np(vec, exps, weights)


# ---------------------------------------------------------------- irreducible sieve


@njit(cache=True)
def _sieve_nb(q, e, factor_codes, factor_degs, add_tab, mul_tab):
    size = q ** e
    reducible = np.zeros(size, dtype=np.bool_)
    hdig = np.zeros(e + 1, dtype=np.int64)
    gdig = np.zeros(e + 1, dtype=np.int64)
    prod = np.zeros(e + 1, dtype=np.int64)
    for idx in range(factor_codes.shape[0]):
        a = factor_degs[idx]
        b = e - a
        c = factor_codes[idx]
        for i in range(a):
            hdig[i] = c % q
            c //= q
        hdig[a] = 1
        for g in range(q ** b):
            c = g
            for i in range(b):
                gdig[i] = c % q
                c //= q
            gdig[b] = 1
            for i in range(e + 1):
                prod[i] = 0
            for i in range(a + 1):
                hi = hdig[i]
                if hi == 0:
                    continue
                for j in range(b + 1):
                    prod[i + j] = add_tab[prod[i + j], mul_tab[hi, gdig[j]]]
            code = 0
            for i in range(e - 1, -1, -1):
                code = code * q + prod[i]
            reducible[code] = True
    return reducible


def _sieve_np(q, e, factor_codes, factor_degs, add_tab, mul_tab):
    reducible = np.zeros(q ** e, dtype=bool)
    place = q ** np.arange(e, dtype=np.int64)
    for c, a in zip(factor_codes.tolist(), factor_degs.tolist()):
        b = e - a
        hdig = np.append(codes_to_rows(np.array([c]), q, a)[0], 1)
        gdig = np.concatenate(
            [codes_to_rows(np.arange(q ** b, dtype=np.int64), q, b), np.ones((q ** b, 1), dtype=np.int64)],
            axis=1,
        )
        prod = np.zeros((q ** b, e + 1), dtype=np.int64)
        for i in range(a + 1):
            if hdig[i] == 0:
                continue
            for j in range(b + 1):
                prod[:, i + j] = add_tab[prod[:, i + j], mul_tab[hdig[i], gdig[:, j]]]
        reducible[prod[:, :e] @ place] = True
    return reducible


def sieve_reducible(q, e, factor_codes, factor_degs, add_tab, mul_tab, backend=None):
    """Mark every monic degree-``e`` polynomial divisible by one of the given
    monic factors (lower-coefficient codes with their degrees, each <= e/2).

    Index ``c`` of the result is the monic polynomial whose coefficients
    below the leading one are the base-q digits of ``c``.
    """
    factor_codes = np.asarray(factor_codes, dtype=np.int64)
    factor_degs = np.asarray(factor_degs, dtype=np.int64)
    if resolve_backend(backend) == "numba":
        return _sieve_nb(q, e, factor_codes, factor_degs, add_tab, mul_tab)
    return _sieve_np(q, e, factor_codes, factor_degs, add_tab, mul_tab)
