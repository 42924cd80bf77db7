"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The backend is picked once at import from ``CFDIM_BACKEND`` (``numba`` or
``numpy``; default ``numba`` when importable).  Every public kernel also takes
an explicit ``backend=`` so tests and the benchmark can run both side by side.

Reductions use a fixed combination tree (fixed block size, blocks merged
pairwise in index order), so the result never depends on the worker count.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # deterministic fixed-chunk kernels only; avoids the TBB version probe
        numba.config.THREADING_LAYER = "workqueue"
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(f):
            return f

        return wrap

    prange = range

BLOCK = 4096


def _resolve_default() -> str:
    want = os.environ.get("CFDIM_BACKEND", "numba").strip().lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"CFDIM_BACKEND must be 'numba' or 'numpy', got {want!r}")
    if want == "numba" and not HAVE_NUMBA:
        return "numpy"
    return want


DEFAULT_BACKEND = _resolve_default()


def _pick(backend: str | None) -> str:
    b = backend or DEFAULT_BACKEND
    if b not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {b!r}")
    if b == "numba" and not HAVE_NUMBA:
        return "numpy"
    return b


def set_threads(n: int | None) -> None:
    """Set the numba worker count (no-op on the numpy path)."""
    if n and HAVE_NUMBA:
        numba.set_num_threads(min(int(n), numba.config.NUMBA_NUM_THREADS))


# ---------------------------------------------------------------------------
# log-continuants of every word in {1..M}^n, lexicographic order
# ---------------------------------------------------------------------------


def _logq_numpy(n: int, M: int) -> np.ndarray:
    # carry log q_k and r_k = q_{k-1}/q_k; q_{k+1} = q_k (a + r_k)
    logq = np.zeros(1)
    ratio = np.zeros(1)
    digits = np.arange(1, M + 1, dtype=np.float64)
    for _ in range(n):
        step = digits[None, :] + ratio[:, None]
        logq = (logq[:, None] + np.log(step)).ravel()
        ratio = (1.0 / step).ravel()
    return logq


@njit(parallel=True, cache=True)
def _logq_numba(n, M):
    # same layer-by-layer recurrence as the numpy path, children of each parent in parallel
    logq = np.zeros(1)
    ratio = np.zeros(1)
    for _ in range(n):
        size = logq.shape[0]
        nlogq = np.empty(size * M)
        nratio = np.empty(size * M)
        for i in prange(size):
            for a in range(M):
                step = (a + 1.0) + ratio[i]
                nlogq[i * M + a] = logq[i] + np.log(step)
                nratio[i * M + a] = 1.0 / step
        logq, ratio = nlogq, nratio
    return logq


def log_continuant_table(n: int, M: int, backend: str | None = None) -> np.ndarray:
    """Return log q_n for all M**n words of length n, lexicographically ordered."""
    if n < 0 or M < 1:
        raise ValueError("need n >= 0 and M >= 1")
    if n == 0:
        return np.zeros(1)
    if _pick(backend) == "numba":
        return _logq_numba(n, M)
    return _logq_numpy(n, M)


# ---------------------------------------------------------------------------
# fixed-tree log-sum-exp
# ---------------------------------------------------------------------------


@njit(cache=True)
def _pairwise_combine(vals):
    v = vals.copy()
    m = v.shape[0]
    while m > 1:
        half = m // 2
        for i in range(half):
            v[i] = v[2 * i] + v[2 * i + 1]
        if m % 2 == 1:
            v[half] = v[m - 1]
            m = half + 1
        else:
            m = half
    return v[0]


def _pairwise_combine_py(vals: np.ndarray) -> float:
    v = list(vals)
    while len(v) > 1:
        nxt = [v[i] + v[i + 1] for i in range(0, len(v) - 1, 2)]
        if len(v) % 2:
            nxt.append(v[-1])
        v = nxt
    return float(v[0])


@njit(parallel=True, cache=True)
def _block_sums_numba(x, shift, block):
    nblocks = (x.shape[0] + block - 1) // block
    sums = np.empty(nblocks)
    for b in prange(nblocks):
        lo = b * block
        hi = min(lo + block, x.shape[0])
        acc = 0.0
        for i in range(lo, hi):
            acc += np.exp(x[i] - shift)
        sums[b] = acc
    return sums


def _block_sums_numpy(x: np.ndarray, shift: float, block: int) -> np.ndarray:
    nblocks = -(-x.shape[0] // block)
    pad = nblocks * block - x.shape[0]
    e = np.exp(x - shift)
    if pad:
        e = np.concatenate([e, np.zeros(pad)])
    e = e.reshape(nblocks, block)
    # sequential left-to-right per block, matching the numba path's order
    return np.add.accumulate(e, axis=1)[:, -1]


def logsumexp_fixed(x: np.ndarray, backend: str | None = None) -> float:
    """log(sum(exp(x))) with a worker-count independent reduction tree."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.size == 0:
        return -np.inf
    shift = float(np.max(x))
    if not np.isfinite(shift):
        return shift
    if _pick(backend) == "numba":
        sums = _block_sums_numba(x, shift, BLOCK)
        total = _pairwise_combine(sums)
    else:
        sums = _block_sums_numpy(x, shift, BLOCK)
        total = _pairwise_combine_py(sums)
    return shift + float(np.log(total))


# ---------------------------------------------------------------------------
# Chebyshev collocation of the transfer operator
# ---------------------------------------------------------------------------


def chebyshev_nodes(K: int) -> tuple[np.ndarray, np.ndarray]:
    """Chebyshev-Lobatto nodes on [0, 1] and their barycentric weights."""
    j = np.arange(K)
    x = 0.5 * (1.0 - np.cos(np.pi * j / (K - 1)))
    w = (-1.0) ** j
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w


def _transfer_matrix_numpy(s: float, M: int, x: np.ndarray, w: np.ndarray) -> np.ndarray:
    K = x.shape[0]
    out = np.zeros((K, K))
    for a in range(1, M + 1):
        ax = a + x
        y = 1.0 / ax
        d = y[:, None] - x[None, :]
        exact = d == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            c = w[None, :] / d
        hit = exact.any(axis=1)
        c[hit] = exact[hit].astype(np.float64)
        c[~hit] /= c[~hit].sum(axis=1, keepdims=True)
        out += ax[:, None] ** (-2.0 * s) * c
    return out


@njit(parallel=True, cache=True)
def _transfer_matrix_numba(s, M, x, w):
    K = x.shape[0]
    out = np.zeros((K, K))
    for i in prange(K):
        row = np.zeros(K)
        for a in range(1, M + 1):
            ax = a + x[i]
            y = 1.0 / ax
            weight = ax ** (-2.0 * s)
            hit = -1
            for j in range(K):
                if y == x[j]:
                    hit = j
                    break
            if hit >= 0:
                row[hit] += weight
                continue
            denom = 0.0
            for j in range(K):
                denom += w[j] / (y - x[j])
            for j in range(K):
                row[j] += weight * (w[j] / (y - x[j])) / denom
        for j in range(K):
            out[i, j] = row[j]
    return out


def transfer_matrix(s: float, M: int, K: int, backend: str | None = None) -> np.ndarray:
    """Collocation matrix of f -> sum_{a<=M} (a+x)^{-2s} f(1/(a+x)) on K nodes."""
    x, w = chebyshev_nodes(K)
    if _pick(backend) == "numba":
        return _transfer_matrix_numba(float(s), int(M), x, w)
    return _transfer_matrix_numpy(float(s), int(M), x, w)
