"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the bare summary, or
through pytest, where the lines are repeated in the terminal summary.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np

from cfdim import cf, classify, covering, verify
from cfdim.pressure import Potential, SpectralConfig, dim_root, direct_sum, root_finite, spectral_eigenvalue

RESULTS = []


def record(number, title, ok, detail, elapsed, limit=None):
    over = limit is not None and elapsed > limit
    ok = bool(ok) and not over
    timing = f"{elapsed:.1f}s" + (f" (limit {limit}s)" if limit else "")
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail} [{timing}]"
    RESULTS.append(line)
    print(line)
    return ok, line


# 1 -------------------------------------------------------------------------


def test_criterion_01_oracle_spectral_equivalence():
    t = time.perf_counter()
    cfg = SpectralConfig(alphabet_max=3)
    worst = 0.0
    for pot in (Potential.sB(2.0), Potential.sB(16.0), Potential.s0(16.0), Potential.g(16.0, 4.5)):
        for s in np.linspace(0.3, 1.0, 20):
            s = float(s)
            spec = spectral_eigenvalue(pot, s, cfg)
            ratio = direct_sum(pot, s, 13, 3) - direct_sum(pot, s, 12, 3)
            worst = max(worst, abs(spec - ratio))
    ok, line = record(1, "spectral vs cylinder-ratio", worst <= 1e-3, f"max |diff| = {worst:.3e} (tol 1e-3)",
                      time.perf_counter() - t, 60)
    assert ok, line


# 2 -------------------------------------------------------------------------


def test_criterion_02_bounded_alphabet_benchmark():
    t = time.perf_counter()
    spec = dim_root(Potential.zero(), SpectralConfig(alphabet_max=2))
    fin = root_finite(Potential.zero(), 16, 2)
    diff = abs(spec - fin)
    ok = diff <= 1e-3 and abs(spec - 0.5313) <= 0.005
    ok, line = record(2, "E_2 spectral vs depth-16 root", ok,
                      f"spectral {spec:.7f}, depth-16 {fin:.7f}, |diff| = {diff:.3e} (tol 1e-3)",
                      time.perf_counter() - t)
    assert ok, line


# 3 -------------------------------------------------------------------------


def test_criterion_03_limits_in_B():
    t = time.perf_counter()
    cfg = SpectralConfig(alphabet_max=256)
    near_one = dim_root(Potential.sB(1.0001), cfg)
    huge = dim_root(Potential.sB(1e6), cfg)
    ladder = [dim_root(Potential.sB(B), cfg) for B in (1.5, 2.0, 4.0, 16.0, 256.0)]
    decreasing = all(a > b for a, b in zip(ladder, ladder[1:]))
    ok = near_one > 0.98 and 0.5 < huge < 0.52 and decreasing
    detail = (f"s_B(1.0001) = {near_one:.5f} (> 0.98), s_B(1e6) = {huge:.5f} (in (0.5, 0.52)), "
              f"decreasing ladder {decreasing}")
    ok, line = record(3, "s_B limits at M=256", ok, detail, time.perf_counter() - t, 120)
    assert ok, line


# 4 -------------------------------------------------------------------------


def test_criterion_04_boundary_identity():
    t = time.perf_counter()
    cfg = SpectralConfig()
    worst = 0.0
    for B1 in (4.0, 16.0, 100.0):
        s0 = dim_root(Potential.s0(B1), cfg)
        g = dim_root(Potential.g(B1, B1**s0), cfg)
        worst = max(worst, abs(g - s0))
    ok, line = record(4, "g(B1, B1^s0) = s0", worst <= 1e-4, f"max |g - s0| = {worst:.3e} (tol 1e-4)",
                      time.perf_counter() - t, 120)
    assert ok, line


# 5 -------------------------------------------------------------------------


def test_criterion_05_fbb_regime_map():
    t = time.perf_counter()
    config = classify.ClassifierConfig()
    mismatches = skipped = 0
    gap = 0.0
    for B1 in np.logspace(0.2, 3.0, 20):
        B1 = float(B1)
        s0 = classify.s_0(B1, config)
        for e in np.linspace(0.3, 1.0, 20):
            B2 = B1 ** float(e)
            v = classify.classify_FBB(B1, B2, config)
            if B2 <= math.sqrt(B1):
                want = (classify.EMPTY, None)
            elif B2 >= B1**s0:
                want = (classify.DIMENSION, "s_0")
            else:
                want = (classify.DIMENSION, "g")
            if (v.kind, v.formula) != want:
                mismatches += 1
        if s0 <= 0.5:
            # truncated s0 has sunk below 1/2: the s0 curve lies under sqrt(B1), nothing to cross
            skipped += 1
            continue
        below = classify.classify_FBB(B1, B1 ** (s0 - 1e-7), config)
        above = classify.classify_FBB(B1, B1 ** (s0 + 1e-7), config)
        gap = max(gap, abs(below.value - above.value))
    ok = mismatches == 0 and gap <= 1e-3
    ok, line = record(5, "F_{B1,B2} regime map 20x20", ok,
                      f"{mismatches} region mismatches, continuity gap across s0 curve {gap:.3e} (tol 1e-3), "
                      f"{skipped} B1 columns with computed s0 <= 1/2",
                      time.perf_counter() - t)
    assert ok, line


# 6 -------------------------------------------------------------------------


def test_criterion_06_case_fixtures():
    t = time.perf_counter()
    rep = verify.suite_props()
    bad = [c.name for c in rep.checks if not c.ok]
    ok, line = record(6, "E1/E2/P1/P2 case fixtures", rep.ok,
                      f"{len(rep.checks) - len(bad)}/{len(rep.checks)} checks pass {bad or ''}".strip(),
                      time.perf_counter() - t, 30)
    assert ok, line


# 7 -------------------------------------------------------------------------


def test_criterion_07_cf_properties():
    t = time.perf_counter()
    rng = np.random.default_rng(20261016)
    failures = 0
    for _ in range(100_000):
        n = int(rng.integers(1, 21))
        word = tuple(int(a) for a in rng.integers(1, 101, size=n))
        p_prev, q_prev, p, q = 1, 0, 0, 1
        prod = 1
        for k, a in enumerate(word, start=1):
            p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
            prod *= a
            if p_prev * q - p * q_prev != (-1) ** k:
                failures += 1
        if (p, q) != tuple(cf.last_two(word)[2:]):
            failures += 1
        if q * q < 2 ** (n - 1) or not prod <= q <= 2**n * prod:
            failures += 1
        # |I_n| = 1/(q(q + q_{n-1})) in [1/(2q^2), 1/q^2], compared in integers
        denom = q * (q + q_prev)
        if not (q * q <= denom <= 2 * q * q):
            failures += 1
        m = int(rng.integers(1, n + 1))
        if n > 1 and m < n:
            u, v = word[:m], word[m:]
            qu, qv = cf.last_two(u)[3], cf.last_two(v)[3]
            if not qu * qv <= q <= 2 * qu * qv:
                failures += 1
    ok, line = record(7, "continued-fraction properties on 1e5 words", failures == 0,
                      f"{failures} failures", time.perf_counter() - t, 30)
    assert ok, line


# 8 -------------------------------------------------------------------------


def test_criterion_08_cantor_toy_schemes():
    t = time.perf_counter()
    rep = verify.suite_cantor()
    gated = [c for c in rep.checks if c.gate]
    parts = []
    for c in gated:
        d = c.detail
        if c.name.endswith("holder"):
            parts.append(f"{c.name}: fitted c3 {d['fitted_c3']:.3g}")
        elif c.name.endswith("gap"):
            parts.append(f"{c.name}: {'ok' if c.ok else 'FAIL'} (worst gap/bound {d['worst_gap_over_bound']:.3f})")
        elif not c.ok:
            parts.append(f"{c.name}: FAIL")
    ok, line = record(8, "Cantor toy schemes", rep.ok, "; ".join(parts), time.perf_counter() - t, 120)
    assert ok, line


# 9 -------------------------------------------------------------------------


def test_criterion_09_covering_cross_validation():
    t = time.perf_counter()
    sc = verify.toy_scheme(0)
    pred = verify.cover_prediction(sc)
    depth = verify.deepest_cover_depth(sc)
    rep = covering.covering_root(sc, depth, pred)
    diff = abs(rep.root - pred)
    ok, line = record(9, "covering root vs min{s_A1, g}", diff <= 0.1,
                      f"depth {depth}: root {rep.root:.4f}, predicted {pred:.4f} (M={sc.M}), |diff| {diff:.4f} "
                      f"(tol 0.1)", time.perf_counter() - t, 180)
    assert ok, line


# 10 ------------------------------------------------------------------------


def _verify_output(suite, threads):
    env = dict(os.environ, NUMBA_NUM_THREADS="4")
    cmd = [sys.executable, "-m", "cfdim", "verify", suite, "--threads", str(threads)]
    return subprocess.run(cmd, capture_output=True, env=env).stdout


def test_criterion_10_reproducibility():
    t = time.perf_counter()
    differing = [s for s in verify.SUITES if _verify_output(s, 1) != _verify_output(s, 4)]
    ok, line = record(10, "verify reports byte-identical across thread counts", not differing,
                      f"differing suites: {differing or 'none'}", time.perf_counter() - t)
    assert ok, line


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(["", "summary:"] + RESULTS))
