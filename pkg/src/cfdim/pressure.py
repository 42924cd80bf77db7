"""Finite-alphabet pressure and the dimensional numbers s_B, s_0, g_{B1,B2}.

Two independent routes:

* ``direct_sum`` enumerates all M**n words and sums exp(n*alpha(s)) q_n^{-2s}
  in log-space (the cylinder-sum oracle);
* ``spectral_eigenvalue`` takes the leading eigenvalue of the transfer
  operator f -> sum_a e^{alpha(s)} (a+x)^{-2s} f(1/(a+x)), discretised by
  Chebyshev collocation and extracted by power iteration.

All three potentials share one per-symbol shift alpha(s):

    SB(B):      -s log B
    S0(B):      -s^2 log B
    G(B1, B2):  -s log B1 + (1 - s) log B2
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels

DEFAULT_BUDGET = 10**7
FINITE_ROOT_TOL = 1e-10


class PressureError(RuntimeError):
    pass


class BudgetExceeded(PressureError):
    pass


class NoRoot(PressureError):
    pass


class NonConvergence(PressureError):
    pass


class ResolutionError(PressureError):
    """Doubling the node count moved log(lambda) by more than the tolerance."""


class MonotonicityViolation(PressureError):
    pass


@dataclass(frozen=True)
class Potential:
    kind: str  # "SB", "S0" or "G"
    B: float = 1.0
    B2: float = 1.0

    def __post_init__(self):
        if self.kind not in ("SB", "S0", "G"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "G":
            if not (self.B > 1 and self.B2 > 1):
                raise ValueError("G potential needs B1, B2 > 1")
        elif not self.B >= 1:
            # B == 1 is the alpha == 0 limit
            raise ValueError("SB/S0 potential needs B >= 1")

    @classmethod
    def sB(cls, B: float) -> "Potential":
        return cls("SB", float(B))

    @classmethod
    def s0(cls, B: float) -> "Potential":
        return cls("S0", float(B))

    @classmethod
    def g(cls, B1: float, B2: float) -> "Potential":
        return cls("G", float(B1), float(B2))

    @classmethod
    def zero(cls) -> "Potential":
        return cls("SB", 1.0)

    def alpha(self, s: float) -> float:
        if self.kind == "SB":
            return -s * math.log(self.B)
        if self.kind == "S0":
            return -s * s * math.log(self.B)
        return -s * math.log(self.B) + (1.0 - s) * math.log(self.B2)

    def label(self) -> str:
        if self.kind == "G":
            return f"G({self.B!r},{self.B2!r})"
        return f"{self.kind}({self.B!r})"


@dataclass(frozen=True)
class SpectralConfig:
    alphabet_max: int = 128
    nodes: int = 32
    iter_tol: float = 1e-12
    max_iters: int = 500
    # absolute tolerance on log(lambda) for the K -> 2K resolution check
    resolution_tol: float = 1e-9
    root_tol: float = 1e-10

    def __post_init__(self):
        if self.nodes < 8:
            raise ValueError("need at least 8 collocation nodes")
        if not self.iter_tol > 0:
            raise ValueError("iter_tol must be positive")
        if self.alphabet_max < 1:
            raise ValueError("alphabet_max must be >= 1")

    def with_alphabet(self, M: int) -> "SpectralConfig":
        return SpectralConfig(
            M, self.nodes, self.iter_tol, self.max_iters, self.resolution_tol, self.root_tol
        )


# ---------------------------------------------------------------------------
# direct enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=16)
def _logq_cached(n: int, M: int, backend: str | None) -> np.ndarray:
    table = kernels.log_continuant_table(n, M, backend=backend)
    table.setflags(write=False)
    return table


def _check_budget(n: int, M: int, budget: int) -> None:
    if M**n > budget:
        raise BudgetExceeded(f"{M}^{n} = {M**n} words exceeds budget {budget}")


def direct_sum(
    potential: Potential,
    s: float,
    depth: int,
    alphabet_max: int,
    budget: int = DEFAULT_BUDGET,
    backend: str | None = None,
) -> float:
    """log f_n(s) = log sum_{a_i <= M} exp(n alpha(s)) q_n^{-2s}."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    _check_budget(depth, alphabet_max, budget)
    logq = _logq_cached(depth, alphabet_max, backend)
    return depth * potential.alpha(s) + kernels.logsumexp_fixed(-2.0 * s * logq, backend=backend)


def _bisect(fn, lo: float, hi: float, tol: float) -> float:
    """Root of a decreasing fn on [lo, hi] (fn(lo) > 0 >= fn(hi))."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if fn(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def root_finite(
    potential: Potential,
    depth: int,
    alphabet_max: int,
    tol: float = FINITE_ROOT_TOL,
    budget: int = DEFAULT_BUDGET,
    backend: str | None = None,
    upper: float = 1.5,
) -> float:
    """inf{s >= 0 : f_n(s) <= 1}: s_{n,B}(M) or g_{n,B1,B2}(M) depending on the potential."""

    def fn(s):
        return direct_sum(potential, s, depth, alphabet_max, budget, backend)

    if fn(upper) > 0:
        raise NoRoot(f"f_{depth}(s) > 1 on all of [0, {upper}] for {potential.label()}, M={alphabet_max}")
    if fn(0.0) <= 0:
        return 0.0
    return _bisect(fn, 0.0, upper, tol)


# ---------------------------------------------------------------------------
# spectral route
# ---------------------------------------------------------------------------


def _power_iteration(A: np.ndarray, tol: float, max_iters: int) -> float:
    v = np.ones(A.shape[0])
    lam = 0.0
    for _ in range(max_iters):
        w = A @ v
        nrm = float(np.linalg.norm(w))
        if nrm == 0.0 or not np.isfinite(nrm):
            raise NonConvergence("power iteration collapsed")
        new = nrm / float(np.linalg.norm(v))
        v = w / nrm
        if lam and abs(new - lam) <= tol * new:
            return new
        lam = new
    raise NonConvergence(f"no convergence to {tol} within {max_iters} iterations")


def _log_lambda0(s: float, M: int, K: int, tol: float, max_iters: int, backend) -> float:
    A = kernels.transfer_matrix(s, M, K, backend=backend)
    return math.log(_power_iteration(A, tol, max_iters))


def spectral_eigenvalue(
    potential: Potential,
    s: float,
    config: SpectralConfig = SpectralConfig(),
    check_resolution: bool = True,
    backend: str | None = None,
) -> float:
    """log lambda_M(s), the finite-alphabet pressure P_M at s."""
    M, K = config.alphabet_max, config.nodes
    base = _log_lambda0(s, M, K, config.iter_tol, config.max_iters, backend)
    if check_resolution:
        fine = _log_lambda0(s, M, 2 * K, config.iter_tol, config.max_iters, backend)
        if abs(fine - base) > config.resolution_tol:
            raise ResolutionError(
                f"K={K} too small: log lambda moved by {abs(fine - base):.3g} at K={2 * K}"
            )
    return potential.alpha(s) + base


def dim_root(
    potential: Potential,
    config: SpectralConfig = SpectralConfig(),
    backend: str | None = None,
    lo: float = 0.0,
    hi: float = 1.0,
) -> float:
    """Root of the finite-alphabet pressure s -> log lambda_M(s) on [0, 1]."""

    def fn(s):
        return spectral_eigenvalue(potential, s, config, check_resolution=False, backend=backend)

    f_hi = fn(hi)
    if f_hi > 0:
        raise NoRoot(f"pressure still positive at s={hi} for {potential.label()}")
    if fn(lo) <= 0:
        return lo
    root = _bisect(fn, lo, hi, config.root_tol)
    # one resolution check at the root rather than at every bisection step
    spectral_eigenvalue(potential, root, config, check_resolution=True, backend=backend)
    return root


def ratio_oracle(
    potential: Potential, s: float, depth: int, alphabet_max: int, budget: int = DEFAULT_BUDGET
) -> float:
    """direct_sum(n+1) - direct_sum(n): the ratio-limit estimate of log lambda."""
    return direct_sum(potential, s, depth + 1, alphabet_max, budget) - direct_sum(
        potential, s, depth, alphabet_max, budget
    )


# ---------------------------------------------------------------------------
# alphabet ladder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Extrapolation:
    value: float
    extrapolated: float
    error: float
    ladder: tuple[tuple[int, float], ...]


def extrapolate_alphabet(values, tol: float = 1e-6) -> Extrapolation:
    """M -> infinity estimate from a strictly increasing M ladder of dimension values.

    ``value`` is the last rung; ``extrapolated`` adds a geometric-tail
    Richardson correction; ``error`` is the last increment.  Heuristic only.
    """
    ladder = tuple((int(m), float(v)) for m, v in values)
    if len(ladder) < 3:
        raise ValueError("need at least three ladder entries")
    Ms = [m for m, _ in ladder]
    if any(b <= a for a, b in zip(Ms, Ms[1:])):
        raise ValueError("M ladder must be strictly increasing")
    vals = [v for _, v in ladder]
    for (m0, a), (m1, b) in zip(ladder, ladder[1:]):
        if b < a - tol:
            raise MonotonicityViolation(f"dimension dropped from {a} (M={m0}) to {b} (M={m1})")
    d1 = vals[-2] - vals[-3]
    d2 = vals[-1] - vals[-2]
    gap = 0.0
    if d1 > 0 and 0 < d2 < d1:
        r = d2 / d1
        gap = d2 * r / (1.0 - r)
    return Extrapolation(vals[-1], vals[-1] + gap, max(d2, 0.0), ladder)


def dim_ladder(
    potential: Potential,
    ladder=(32, 64, 128),
    config: SpectralConfig = SpectralConfig(),
    backend: str | None = None,
) -> Extrapolation:
    vals = [(M, dim_root(potential, config.with_alphabet(M), backend=backend)) for M in ladder]
    return extrapolate_alphabet(vals)


def convergence_csv(rows) -> str:
    """Rows of (M, K, n, s, value, method) as CSV with a header."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["M", "K", "n", "s", "value", "method"])
    for row in rows:
        M, K, n, s, value, method = row
        w.writerow([M, "" if K is None else K, "" if n is None else n, repr(float(s)), repr(float(value)), method])
    return buf.getvalue()
