"""Finite-depth realisation of the Cantor subset of E(A1, A2).

Digit layout: free stretches of length-N blocks with digits in {1..M}, each
followed by a forced pair

    c1 A1^{n_k} <= a_{n_k} < 2 c1 A1^{n_k},   c2 A2^{n_k} <= a_{n_k+1} < 2 c2 A2^{n_k}.

The first stretch occupies positions 1..l_1 N (so n_1 = l_1 N + 1).  Later
stretches start at n_{k-1} + 2; with ``offset=2`` they hold l_k N digits
(n_k - n_{k-1} = l_k N + 2), with ``offset=1`` they hold l_k N - 1 digits and
end in one short block (n_k - n_{k-1} = l_k N + 1).

Two mass distributions live on the basic cylinders: mu_1 weights a free
block w by q_N(w)^{-2s} A1^{-sN}, mu_2 by A1^N q_N(w)^{-2g} (A1^2 A2)^{-gN};
forced digits split their parent's mass uniformly over the window.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import cf
from .kernels import logsumexp_fixed
from .pressure import Potential, root_finite

DEFAULT_ENUM_BUDGET = 2 * 10**5


class Infeasible(ValueError):
    pass


class NotInScheme(ValueError):
    pass


class EnumerationBudget(ValueError):
    pass


def _lse(vals) -> float:
    return logsumexp_fixed(np.asarray(vals, dtype=np.float64))


@dataclass(frozen=True)
class CantorScheme:
    A1: float
    A2: float
    M: int
    N: int
    eps: float
    ells: tuple[int, ...]
    s: float
    g: float
    c1: float = 1.0
    c2: float = 1.0
    offset: int = 2
    strict: bool = False

    # -- layout -----------------------------------------------------------

    @cached_property
    def forced_positions(self) -> tuple[int, ...]:
        """n_1, n_2, ... for the declared levels."""
        out = []
        n = self.ells[0] * self.N + 1
        out.append(n)
        for ell in self.ells[1:]:
            n = n + ell * self.N + self.offset
            out.append(n)
        return tuple(out)

    @cached_property
    def max_depth(self) -> int:
        return self.forced_positions[-1] + 1

    @cached_property
    def _layout(self) -> tuple:
        """Per position (1-indexed): ("free", block_start, block_len) or ("forced", i, n_k)."""
        slots: list = [None]
        start = 1
        for k, nk in enumerate(self.forced_positions):
            stretch = nk - start
            pos = start
            while pos < nk:
                blen = min(self.N, nk - pos)
                for t in range(blen):
                    slots.append(("free", pos, blen))
                pos += blen
            slots.append(("forced", 0, nk))
            slots.append(("forced", 1, nk))
            start = nk + 2
            del stretch
        return tuple(slots)

    def slot(self, pos: int):
        if pos < 1 or pos > self.max_depth:
            raise NotInScheme(f"position {pos} outside the declared levels (max {self.max_depth})")
        return self._layout[pos]

    def window(self, i: int, nk: int) -> tuple[int, int]:
        """Integer digit range [lo, hi] for the forced position n_k + i."""
        A = Fraction(self.A1 if i == 0 else self.A2)
        c = Fraction(self.c1 if i == 0 else self.c2)
        base = c * A**nk
        lo = math.ceil(base)
        hi = math.ceil(2 * base) - 1
        return lo, hi

    def digit_range(self, pos: int) -> tuple[int, int]:
        kind, a, b = self.slot(pos)
        if kind == "free":
            return 1, self.M
        return self.window(a, b)

    # -- block weights ----------------------------------------------------

    def block_logweight(self, block, j: int) -> float:
        r = len(block)
        lq = math.log(cf.last_two(block)[3])
        if j == 1:
            return -2 * self.s * lq - self.s * r * math.log(self.A1)
        return r * math.log(self.A1) - 2 * self.g * lq - self.g * r * math.log(self.A2 * self.A1**2)

    def _block_lognorm(self, r: int, j: int) -> float:
        # full blocks are normalised by the root equations; short ones explicitly
        if r == self.N:
            return 0.0
        return _short_norm(self, r, j)

    def to_json(self) -> dict:
        d = asdict(self)
        d["forced_positions"] = list(self.forced_positions)
        d["windows"] = [[list(self.window(0, nk)), list(self.window(1, nk))] for nk in self.forced_positions]
        return d


@lru_cache(maxsize=64)
def _short_norm(scheme: CantorScheme, r: int, j: int) -> float:
    return _lse([scheme.block_logweight(w, j) for w in itertools.product(range(1, scheme.M + 1), repeat=r)])


def _min_ell(k_prev: list[int], A1, A2, M, N, eps, cap: int = 10**6) -> int:
    """Least l_k with (2^{l_k (N-1)/2})^{eps/2} >= prod_{t<k} (M+1)^{l_t N} (A1 A2)^{sum_{i<=t} l_i N + t}."""
    rhs = 0.0
    for t in range(1, len(k_prev) + 1):
        partial = sum(k_prev[:t]) * N + t
        rhs += k_prev[t - 1] * N * math.log2(M + 1) + partial * math.log2(A1 * A2)
    per_ell = (N - 1) / 2 * eps / 2
    if rhs <= 0:
        return 1
    if per_ell <= 0:
        raise Infeasible("N = 1 or eps = 0 can never satisfy the sparsity inequality")
    ell = max(1, math.ceil(rhs / per_ell - 1e-12))
    while ell * per_ell < rhs:
        ell += 1
    if ell > cap:
        raise Infeasible(f"l_{len(k_prev) + 1} = {ell} exceeds cap {cap}")
    return ell


def build_scheme(
    A1: float,
    A2: float,
    M: int,
    N: int,
    eps: float,
    levels: int = 1,
    c1: float = 1.0,
    c2: float = 1.0,
    offset: int = 2,
    strict: bool = False,
    ells: tuple[int, ...] | None = None,
) -> CantorScheme:
    """Minimal sparse sequence l_1..l_levels plus the attached roots s_N(M), g_N(M).

    ``ells`` overrides the sparse sequence (a relaxed toy layout that ignores the
    sparsity inequality); it is rejected in strict mode.
    """
    if not (A1 > 1 and A2 > 0 and A1 * A2 > 1):
        raise Infeasible("need A1 > 1, A2 > 0, A1*A2 > 1")
    if M < 3 and strict:
        raise Infeasible("strict mode needs M >= 3")
    if N < 2 or M < 1 or eps <= 0 or levels < 1:
        raise Infeasible("need N >= 2, M >= 1, eps > 0, levels >= 1")
    if offset not in (1, 2):
        raise ValueError("offset must be 1 or 2")
    if strict and (N - 1) / 2 * eps / 2 < 100:
        raise Infeasible("strict mode requires (2^{(N-1)/2})^{eps/2} >= 2^100")
    if ells is not None:
        if strict:
            raise Infeasible("strict mode derives l_k from the sparsity inequality")
        if not ells or any(int(e) < 1 for e in ells):
            raise Infeasible("ells must be positive")
        ells = [int(e) for e in ells]
    else:
        ells = []
        for _ in range(levels):
            ells.append(_min_ell(ells, A1, A2, M, N, eps))
    if strict:
        # M^N words are out of reach at these block lengths; the scheme stays symbolic
        s = g = math.nan
    else:
        s = root_finite(Potential.sB(A1), N, M, tol=0.0)
        g = root_finite(Potential.g(A1 * A2, A1), N, M, tol=0.0)
    scheme = CantorScheme(float(A1), float(A2), int(M), int(N), float(eps), tuple(ells), s, g,
                          float(c1), float(c2), offset, strict)
    for nk in scheme.forced_positions:
        for i in (0, 1):
            lo, hi = scheme.window(i, nk)
            if hi < lo:
                raise Infeasible(f"empty digit window at position {nk + i}")
    return scheme


# ---------------------------------------------------------------------------
# membership, cylinders, masses
# ---------------------------------------------------------------------------


def is_member_prefix(word, scheme: CantorScheme) -> bool:
    """Exact test of the D_n digit constraints."""
    word = tuple(word)
    if len(word) > scheme.max_depth:
        return False
    for pos, a in enumerate(word, start=1):
        lo, hi = scheme.digit_range(pos)
        if not lo <= a <= hi:
            return False
    return True


def _require(word, scheme):
    if scheme.strict:
        raise NotInScheme("strict schemes are symbolic only")
    if not is_member_prefix(word, scheme):
        raise NotInScheme(f"{word} is not in D_{len(word)}")


def basic_cylinder(word, scheme: CantorScheme) -> tuple[Fraction, Fraction]:
    """Exact endpoints of J_n(word): the hull of admissible order-(n+1) children."""
    _require(word, scheme)
    lo, hi = scheme.digit_range(len(word) + 1)
    return cf.basic_interval(word, lo, hi)


def basic_length(word, scheme: CantorScheme) -> Fraction:
    left, right = basic_cylinder(word, scheme)
    return right - left


def log_mass(word, j: int, scheme: CantorScheme) -> float:
    """log mu_j(J_n(word))."""
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    word = tuple(word)
    _require(word, scheme)
    return _log_mass(scheme, word, j)


@lru_cache(maxsize=1 << 20)
def _block_lw(scheme: CantorScheme, block: tuple, j: int) -> float:
    return scheme.block_logweight(block, j)


@lru_cache(maxsize=1 << 16)
def _partial_lse(scheme: CantorScheme, head: tuple, blen: int, j: int) -> float:
    # child-sum over completions of a truncated block
    tails = itertools.product(range(1, scheme.M + 1), repeat=blen - len(head))
    return _lse([_block_lw(scheme, head + t, j) for t in tails])


@lru_cache(maxsize=1 << 20)
def _log_mass(scheme: CantorScheme, word: tuple, j: int) -> float:
    n = len(word)
    if n == 0:
        return 0.0
    kind, a, b = scheme.slot(n)
    if kind == "forced":
        lo, hi = scheme.window(a, b)
        return _log_mass(scheme, word[:-1], j) - math.log(hi - lo + 1)
    start, blen = a, b
    base = _log_mass(scheme, word[: start - 1], j) - scheme._block_lognorm(blen, j)
    head = word[start - 1 :]
    if len(head) == blen:
        return base + _block_lw(scheme, head, j)
    return base + _partial_lse(scheme, head, blen, j)


def enumerate_words(scheme: CantorScheme, depth: int, budget: int = DEFAULT_ENUM_BUDGET):
    """All D_depth words, lexicographic."""
    if scheme.strict:
        raise NotInScheme("strict schemes are symbolic only")
    if depth > scheme.max_depth:
        raise NotInScheme(f"depth {depth} beyond declared levels")
    ranges = [scheme.digit_range(p) for p in range(1, depth + 1)]
    count = 1
    for lo, hi in ranges:
        count *= hi - lo + 1
    if count > budget:
        raise EnumerationBudget(f"{count} words at depth {depth} exceed budget {budget}")
    return itertools.product(*(range(lo, hi + 1) for lo, hi in ranges))


def gap_lower_bound(word, scheme: CantorScheme) -> float:
    """log(|J_n| / M): the certified gap to every other basic cylinder of order n."""
    return math.log(basic_length(word, scheme)) - math.log(scheme.M)


@dataclass(frozen=True)
class GapReport:
    depth: int
    count: int
    worst_ratio: float  # min over cylinders of gap / (|J_n| / M)
    failures: int

    @property
    def ok(self) -> bool:
        return self.failures == 0


def gap_check(scheme: CantorScheme, depth: int, budget: int = DEFAULT_ENUM_BUDGET) -> GapReport:
    """Exhaustive gap check between neighbouring order-depth basic cylinders."""
    cyl = sorted(basic_cylinder(w, scheme) + (w,) for w in enumerate_words(scheme, depth, budget))
    worst = math.inf
    failures = 0
    for i, (left, right, w) in enumerate(cyl):
        gaps = []
        if i > 0:
            gaps.append(left - cyl[i - 1][1])
        if i + 1 < len(cyl):
            gaps.append(cyl[i + 1][0] - right)
        if not gaps:
            continue
        gap = min(gaps)
        ratio = gap * scheme.M / (right - left)
        worst = min(worst, float(ratio))
        if ratio < 1:
            failures += 1
    return GapReport(depth, len(cyl), worst, failures)


@dataclass(frozen=True)
class HolderResult:
    ok: bool
    ratio: float  # mu / |J|^tau


def holder_check(word, j: int, scheme: CantorScheme, tau: float, c3: float = 2.0**12) -> HolderResult:
    """mu_j(J_n) <= c3 |J_n|^tau, with the actual ratio for diagnostics."""
    lm = log_mass(word, j, scheme)
    ll = math.log(basic_length(word, scheme))
    ratio = math.exp(lm - tau * ll)
    return HolderResult(ratio <= c3, ratio)


def default_tau(scheme: CantorScheme) -> float:
    return min(scheme.s, scheme.g) / (1.0 + scheme.eps)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _block_table(scheme: CantorScheme, r: int):
    words = list(itertools.product(range(1, scheme.M + 1), repeat=r))
    lw = np.array([scheme.block_logweight(w, 1) for w in words])
    p = np.exp(lw - lw.max())
    return words, p / p.sum()


def sample_point(scheme: CantorScheme, seed: int, depth: int, budget: int = 10**4):
    """Draw a depth-``depth`` word (free blocks by mu_1 weights, forced digits uniform).

    Returns (midpoint of the cylinder as a Fraction, word).  Deterministic in ``seed``.
    """
    return sample_points(scheme, seed, depth, 1, budget)[0]


def sample_points(scheme: CantorScheme, seed: int, depth: int, count: int, budget: int = 10**4):
    if scheme.strict:
        raise NotInScheme("strict schemes are symbolic only")
    if depth > scheme.max_depth:
        raise NotInScheme(f"depth {depth} beyond declared levels")
    if scheme.M**scheme.N > budget:
        raise EnumerationBudget("block table exceeds budget")
    rng = np.random.default_rng(seed)
    tables = {}
    out = []
    for _ in range(count):
        word: list[int] = []
        pos = 1
        while pos <= depth:
            kind, a, b = scheme.slot(pos)
            if kind == "forced":
                lo, hi = scheme.window(a, b)
                word.append(int(rng.integers(lo, hi + 1)))
                pos += 1
                continue
            blen = b
            if blen not in tables:
                tables[blen] = _block_table(scheme, blen)
            words, p = tables[blen]
            block = words[int(rng.choice(len(words), p=p))]
            take = min(blen, depth - pos + 1)
            word.extend(block[:take])
            pos += blen
        word_t = tuple(word)
        c = cf.cylinder(word_t)
        out.append(((c.left + c.right) / 2, word_t))
    return out


def points_csv(samples) -> str:
    lines = ["numerator,denominator,depth,word"]
    for x, w in samples:
        lines.append(f"{x.numerator},{x.denominator},{len(w)},{' '.join(map(str, w))}")
    return "\n".join(lines) + "\n"


def enumeration_dump(scheme: CantorScheme, depth: int, budget: int = DEFAULT_ENUM_BUDGET) -> str:
    rows = []
    for w in enumerate_words(scheme, depth, budget):
        left, right = basic_cylinder(w, scheme)
        rows.append(
            {
                "word": list(w),
                "left": str(left),
                "right": str(right),
                "log_length": math.log(right - left),
                "log_mass": [log_mass(w, 1, scheme), log_mass(w, 2, scheme)],
            }
        )
    return json.dumps({"scheme": scheme.to_json(), "depth": depth, "cylinders": rows}, sort_keys=True)


@dataclass(frozen=True)
class MassReport:
    depth: int
    count: int
    normalization_error: float  # |sum of masses at this depth - 1|, per measure
    consistency_error: float  # max |mu(parent) - sum mu(children)|, per measure


def mass_check(scheme: CantorScheme, depth: int, budget: int = DEFAULT_ENUM_BUDGET) -> MassReport:
    """Normalisation at ``depth`` and parent/child additivity from depth to depth+1."""
    words = list(enumerate_words(scheme, depth + 1, budget))
    lo, hi = scheme.digit_range(depth + 1)
    width = hi - lo + 1
    norm_err = 0.0
    cons_err = 0.0
    for j in (1, 2):
        child = np.array([log_mass(w, j, scheme) for w in words])
        norm_err = max(norm_err, abs(math.exp(_lse(child)) - 1.0))
        for i in range(0, len(words), width):
            parent = words[i][:-1]
            lp = log_mass(parent, j, scheme) if parent else 0.0
            cons_err = max(cons_err, abs(math.exp(_lse(child[i : i + width])) - math.exp(lp)))
    return MassReport(depth, len(words) // width, norm_err, cons_err)


@dataclass(frozen=True)
class HolderFit:
    depth: int
    tau: float
    fitted_c3: float  # max over cylinders and both measures of mu / |J|^tau
    c3: float

    @property
    def ok(self) -> bool:
        return self.fitted_c3 <= self.c3


def holder_fit(scheme: CantorScheme, depth: int, tau: float | None = None, c3: float = 2.0**12,
               budget: int = DEFAULT_ENUM_BUDGET) -> HolderFit:
    tau = default_tau(scheme) if tau is None else tau
    worst = 0.0
    for w in enumerate_words(scheme, depth, budget):
        ll = math.log(basic_length(w, scheme))
        for j in (1, 2):
            worst = max(worst, math.exp(log_mass(w, j, scheme) - tau * ll))
    return HolderFit(depth, tau, worst, c3)


def enumerable_depth(scheme: CantorScheme, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """Deepest order <= n_1 + 1 + N whose D_{n+1} fits the budget."""
    cap = min(scheme.forced_positions[0] + 1 + scheme.N, scheme.max_depth - 1)
    count = 1
    for d in range(1, cap + 2):
        lo, hi = scheme.digit_range(d)
        count *= hi - lo + 1
        if count > budget:
            return d - 2
    return cap
