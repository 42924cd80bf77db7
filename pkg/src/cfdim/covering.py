"""Empirical dimension estimates: exact covering sums and box counting."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

import numpy as np

from .cantor import DEFAULT_ENUM_BUDGET, CantorScheme, basic_cylinder, enumerate_words
from .kernels import logsumexp_fixed

ROOT_TOL = 1e-12


class DegenerateLadder(ValueError):
    pass


@dataclass(frozen=True)
class CoverReport:
    depth: int
    root: float
    sum_at_prediction: float  # log of sum |J_n|^s at s = predicted
    predicted: float
    bracket: tuple[float, float]
    count: int

    def to_json(self) -> dict:
        d = asdict(self)
        d["bracket"] = list(self.bracket)
        return d


def log_lengths(scheme: CantorScheme, depth: int, budget: int = DEFAULT_ENUM_BUDGET) -> np.ndarray:
    """log |J_depth| for every basic cylinder of that order, lexicographic."""
    out = []
    for w in enumerate_words(scheme, depth, budget):
        left, right = basic_cylinder(w, scheme)
        d = right - left
        # log of a ratio of big ints without float overflow
        out.append(math.log(d.numerator) - math.log(d.denominator))
    return np.array(out)


def log_cover_sum(loglen: np.ndarray, s: float) -> float:
    return logsumexp_fixed(s * loglen)


def covering_root(
    scheme: CantorScheme,
    depth: int,
    predicted: float,
    budget: int = DEFAULT_ENUM_BUDGET,
    tol: float = ROOT_TOL,
) -> CoverReport:
    """Root in [0, 1] of sum |J_n|^s = 1 over order-``depth`` basic cylinders."""
    ll = log_lengths(scheme, depth, budget)
    lo, hi = 0.0, 1.0
    if log_cover_sum(ll, hi) > 0:
        # cannot happen for disjoint subintervals of [0, 1]
        raise ArithmeticError("covering sum exceeds 1 at s = 1")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if log_cover_sum(ll, mid) > 0:
            lo = mid
        else:
            hi = mid
    return CoverReport(depth, 0.5 * (lo + hi), log_cover_sum(ll, predicted), predicted, (lo, hi), len(ll))


def convergence_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["depth", "root", "sum_at_prediction"])
    for r in reports:
        w.writerow([r.depth, repr(r.root), repr(r.sum_at_prediction)])
    return buf.getvalue()


@dataclass(frozen=True)
class BoxCount:
    slope: float
    residual: float
    counts: tuple[int, ...]
    heuristic: bool = True  # a finite sample bounds nothing rigorously


def boxcount(points, eps_ladder) -> BoxCount:
    """Least-squares slope of log N(eps) against log(1/eps).  Heuristic diagnostic only."""
    eps = [float(e) for e in eps_ladder]
    if len(eps) < 2:
        raise DegenerateLadder("need at least two scales")
    if any(not e > 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise DegenerateLadder("scales must be positive and strictly decreasing")
    x = np.array([float(p) for p in points])
    if x.size == 0:
        raise DegenerateLadder("no points")
    counts = tuple(int(np.unique(np.floor(x / e)).size) for e in eps)
    lx = np.log(1.0 / np.array(eps))
    ly = np.log(np.array(counts, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    return BoxCount(float(slope), resid, counts)
