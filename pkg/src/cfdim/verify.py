"""Named invariant suites behind ``cfdim verify``.

Each suite returns a report: a list of checks, each with a name, an anchor
describing the mathematical fact being checked, a pass flag, numeric detail
and whether the check gates the suite (diagnostics do not).  Reports hold no
timings or machine-dependent data, so they are byte-stable across runs and
thread counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import cantor, classify, covering, growth
from .pressure import Potential, SpectralConfig, dim_root, direct_sum, root_finite, spectral_eigenvalue

SUITES = ("props", "pressure", "cantor", "cover")

TOY_SCHEMES = (
    dict(A1=2.0, A2=2.0, M=3, N=3),
    dict(A1=3.0, A2=1.5, M=4, N=2),
)
TOY_EPS = 0.5
TOY_LEVELS = 2


@dataclass
class Check:
    name: str
    anchor: str
    ok: bool
    detail: dict = field(default_factory=dict)
    gate: bool = True

    def to_json(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "ok": bool(self.ok), "gate": self.gate,
                "detail": self.detail}


@dataclass
class Report:
    suite: str
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks if c.gate)

    def to_json(self) -> dict:
        return {"suite": self.suite, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def toy_scheme(i: int, offset: int = 2) -> cantor.CantorScheme:
    return cantor.build_scheme(**TOY_SCHEMES[i], eps=TOY_EPS, levels=TOY_LEVELS, offset=offset)


# ---------------------------------------------------------------------------


def suite_props(config: classify.ClassifierConfig = classify.ClassifierConfig()) -> Report:
    checks = []
    for B in (2, 3, 5):
        e1 = classify.classify_F2(growth.Exponential(B**2, 1.0), growth.Exponential(B, 1.0), config)
        checks.append(Check(
            f"E1 B={B}", "a_n a_{n+1} >= B^(2n), a_{n+1} < B^n: empty on the B1 = B2^2 boundary",
            e1.kind == classify.EMPTY and e1.regime == "F2:boundary:B1=B2^2" and e1.boundary,
            {"kind": e1.kind, "regime": e1.regime},
        ))
        e2 = classify.classify_F2(growth.Exponential(B**2, 1.0 / B), growth.Exponential(B, 3.0 * B), config)
        g = classify.g_of(B**2, B, config)
        checks.append(Check(
            f"E2 B={B}", "a_n a_{n+1} >= B^(2n-1), a_{n+1} < 3B^(n+1): dimension g_{B^2,B}",
            e2.kind == classify.DIMENSION and e2.regime == "F2:boundary:B1=B2^2"
            and e2.formula == "g" and abs(e2.value - g) <= 1e-12,
            {"kind": e2.kind, "regime": e2.regime, "value": e2.value, "g": g},
        ))
    for b in (2, 3):
        phi = growth.DoublyExp(float(b), 1.0)
        p1 = classify.classify_F2(phi, phi, config)
        checks.append(Check(
            f"P1 b={b}", "Phi1 = Phi2 = e^(b^n): dimension 1/(1+b)",
            p1.kind == classify.DIMENSION and p1.regime == "F2:boundary:b1=b2"
            and abs(p1.value - 1.0 / (1.0 + b)) <= 1e-15,
            {"kind": p1.kind, "regime": p1.regime, "value": p1.value},
        ))
    p2 = classify.classify_F2(growth.DoublyExp(2.0, 5.0), growth.ShiftedDoublyExp(2.0, 1.0, -1), config)
    checks.append(Check(
        "P2 b=2", "Phi1 = e^(5 b^n), Phi2 = e^(b^(n-1)): empty",
        p2.kind == classify.EMPTY and p2.regime == "F2:boundary:b1=b2",
        {"kind": p2.kind, "regime": p2.regime},
    ))
    return Report("props", checks)


PRESSURE_POTENTIALS = (
    Potential.sB(2.0),
    Potential.sB(16.0),
    Potential.s0(16.0),
    Potential.g(16.0, 4.5),
)


def suite_pressure(backend: str | None = None) -> Report:
    checks = []
    cfg = SpectralConfig(alphabet_max=3)
    grid = np.linspace(0.3, 1.0, 20)
    for pot in PRESSURE_POTENTIALS:
        worst = 0.0
        for s in grid:
            spec = spectral_eigenvalue(pot, float(s), cfg, backend=backend)
            ratio = direct_sum(pot, float(s), 13, 3, backend=backend) - direct_sum(pot, float(s), 12, 3, backend=backend)
            worst = max(worst, abs(spec - ratio))
        checks.append(Check(
            f"spectral vs cylinder ratio {pot.label()}",
            "log lambda_M(s) = lim log(f_{n+1}/f_n), M=3, n=12, 20-point grid on [0.3, 1]",
            worst <= 1e-3, {"max_abs_diff": worst},
        ))
    zero = Potential.zero()
    spec_root = dim_root(zero, SpectralConfig(alphabet_max=2), backend=backend)
    checks.append(Check(
        "E_2 regression", "dimension of digits <= 2 is 0.5312805...",
        abs(spec_root - 0.5313) <= 0.005, {"value": spec_root},
    ))
    fin = root_finite(zero, 16, 2, backend=backend)
    checks.append(Check(
        "finite-depth root vs spectral root", "root of f_16 with M=2 within 1e-3 of the pressure root",
        abs(fin - spec_root) <= 1e-3, {"depth_16": fin, "spectral": spec_root, "difference": abs(fin - spec_root)},
    ))
    a = direct_sum(Potential.sB(2.0), 0.7, 12, 3, backend="numpy")
    b = direct_sum(Potential.sB(2.0), 0.7, 12, 3, backend="numba")
    checks.append(Check("backend agreement", "numpy and numba cylinder sums are bit-identical",
                        a == b, {"numpy": a, "numba": b}))
    return Report("pressure", checks)


def _scheme_checks(label: str, scheme: cantor.CantorScheme) -> list:
    checks = []
    D = cantor.enumerable_depth(scheme)
    norm = cons = 0.0
    for d in range(0, D + 1):
        r = cantor.mass_check(scheme, d)
        norm = max(norm, r.normalization_error)
        cons = max(cons, r.consistency_error)
    checks.append(Check(f"{label} mass", "mu_j normalised and additive over children, both measures",
                        norm <= 1e-12 and cons <= 1e-12,
                        {"max_depth": D, "normalization_error": norm, "consistency_error": cons}))
    n1 = scheme.forced_positions[0]
    worst = math.inf
    failures = 0
    for d in range(1, n1 + 2):
        g = cantor.gap_check(scheme, d)
        worst = min(worst, g.worst_ratio)
        failures += g.failures
    checks.append(Check(f"{label} gap", "gap between order-n basic cylinders >= |J_n| / M, n <= n_1 + 1",
                        failures == 0, {"worst_gap_over_bound": worst, "failures": failures,
                                        "max_depth": n1 + 1}))
    checks.append(Check(f"{label} gap, halved constant", "gap >= |J_n| / (2M): the bound up to a factor 2",
                        worst >= 0.5, {"worst_gap_over_bound": worst}, gate=False))
    fitted = 0.0
    tau = cantor.default_tau(scheme)
    for d in range(1, D + 1):
        fitted = max(fitted, cantor.holder_fit(scheme, d, tau).fitted_c3)
    checks.append(Check(f"{label} holder", "mu_j(J_n) <= c3 |J_n|^tau, tau = min(s, g)/(1 + eps), c3 = 2^12",
                        fitted <= 2.0**12, {"tau": tau, "fitted_c3": fitted, "c3": 2.0**12, "max_depth": D}))
    return checks


def suite_cantor() -> Report:
    checks = []
    for i, p in enumerate(TOY_SCHEMES):
        label = f"toy(A1={p['A1']!r},A2={p['A2']!r},M={p['M']},N={p['N']})"
        checks.extend(_scheme_checks(label, toy_scheme(i)))
    # both readings of the layout on a relaxed scheme small enough to reach n_2 + 1
    for offset in (1, 2):
        sc = cantor.build_scheme(2.0, 1.0, 2, 2, TOY_EPS, offset=offset, ells=(1, 1))
        norm = cons = 0.0
        D = cantor.enumerable_depth(sc)
        for d in range(0, D + 1):
            r = cantor.mass_check(sc, d)
            norm, cons = max(norm, r.normalization_error), max(cons, r.consistency_error)
        checks.append(Check(f"layout offset={offset} mass",
                            "n_k - n_(k-1) = l_k N + offset: masses consistent through n_2 + 1",
                            norm <= 1e-12 and cons <= 1e-12,
                            {"forced_positions": list(sc.forced_positions), "max_depth": D,
                             "normalization_error": norm, "consistency_error": cons}))
    return Report("cantor", checks)


def cover_prediction(scheme: cantor.CantorScheme, backend: str | None = None) -> float:
    """min{s_A1, g_{A1 A2, A1}} from the spectral solver at the scheme's alphabet."""
    cfg = SpectralConfig(alphabet_max=scheme.M)
    s = dim_root(Potential.sB(scheme.A1), cfg, backend=backend)
    g = dim_root(Potential.g(scheme.A1 * scheme.A2, scheme.A1), cfg, backend=backend)
    return min(s, g)


def deepest_cover_depth(scheme: cantor.CantorScheme, budget: int = cantor.DEFAULT_ENUM_BUDGET) -> int:
    count = 1
    for d in range(1, scheme.max_depth):
        lo, hi = scheme.digit_range(d)
        count *= hi - lo + 1
        if count > budget:
            return d - 1
    return scheme.max_depth - 1


def suite_cover(seed: int = 0) -> Report:
    checks = []
    sc = toy_scheme(0)
    pred = cover_prediction(sc)
    depth = deepest_cover_depth(sc)
    rep = covering.covering_root(sc, depth, pred)
    checks.append(Check("covering root vs solver", "root of sum |J_n|^s = 1 within 0.1 of min{s_A1, g}",
                        abs(rep.root - pred) <= 0.1, rep.to_json()))
    lo = covering.log_cover_sum(covering.log_lengths(sc, depth), pred - 0.05)
    hi = covering.log_cover_sum(covering.log_lengths(sc, depth), pred + 0.05)
    checks.append(Check("covering sum brackets prediction +-0.05",
                        "sum > 1 at prediction - 0.05 and < 1 at prediction + 0.05",
                        lo > 0 > hi, {"log_sum_minus": lo, "log_sum_plus": hi}, gate=False))
    pts = cantor.sample_points(sc, seed, 40, 10_000)
    bc = covering.boxcount([x for x, _ in pts], [2.0**-k for k in range(6, 16)])
    checks.append(Check("box counting (heuristic)", "slope of log N(eps) within 0.15 of min{s_A1, g}",
                        abs(bc.slope - pred) <= 0.15,
                        {"slope": bc.slope, "residual": bc.residual, "predicted": pred, "seed": seed},
                        gate=False))
    return Report("cover", checks)


def run_suite(name: str, seed: int = 0) -> Report:
    if name == "props":
        return suite_props()
    if name == "pressure":
        return suite_pressure()
    if name == "cantor":
        return suite_cantor()
    if name == "cover":
        return suite_cover(seed)
    raise ValueError(f"unknown suite {name!r}")
