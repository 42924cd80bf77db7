"""Piecewise Hausdorff-dimension verdicts for the continued-fraction exceptional sets.

Sets handled: E1(Phi), E2(Phi), F(Phi), F(Phi1, Phi2), F_{B1,B2}, E(A1, A2),
plus the two auxiliary formulas 1/(b+1) and the liminf formula for sets
{s_n <= a_n < N s_n}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from . import growth
from .growth import (
    DoublyExp,
    Exponential,
    GrowthSpec,
    PowerLaw,
    ShiftedDoublyExp,
    Table,
    exponents,
    incompatibility_test,
    log_expansions,
)
from .pressure import Potential, SpectralConfig, dim_root

INF = math.inf

DIMENSION = "Dimension"
EMPTY = "Empty"
ZERO_OR_EMPTY = "ZeroOrEmpty"


class Unsupported(ValueError):
    pass


class LimitMissing(ValueError):
    pass


@dataclass(frozen=True)
class ClassifierConfig:
    spectral: SpectralConfig = SpectralConfig()
    horizon: int = 50
    # |log B2 - s0 log B1| <= band * log B1 counts as "on the s0 curve"
    band: float = 1e-9
    backend: str | None = None


@dataclass
class Verdict:
    kind: str
    regime: str
    value: float | None = None
    formula: str | None = None
    boundary: bool = False
    certificates: list = field(default_factory=list)
    solver_error: float = 0.0
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "formula": self.formula,
            "regime": self.regime,
            "boundary": self.boundary,
            "certificates": self.certificates,
            "solver_error": self.solver_error,
        }
        if self.value is not None:
            out["value"] = self.value
        if self.notes:
            out["notes"] = self.notes
        return out


@lru_cache(maxsize=4096)
def _memo_dim(potential: Potential, spectral: SpectralConfig, backend) -> float:
    return dim_root(potential, spectral, backend=backend)


def s_B(B: float, config: ClassifierConfig = ClassifierConfig()) -> float:
    if B == 1:
        return 1.0
    return _memo_dim(Potential.sB(B), config.spectral, config.backend)


def s_0(B: float, config: ClassifierConfig = ClassifierConfig()) -> float:
    if B == 1:
        return 1.0
    return _memo_dim(Potential.s0(B), config.spectral, config.backend)


def g_of(B1: float, B2: float, config: ClassifierConfig = ClassifierConfig()) -> float:
    return _memo_dim(Potential.g(B1, B2), config.spectral, config.backend)


def _err(config: ClassifierConfig) -> float:
    return config.spectral.root_tol


def _dim(value, formula, regime, config, **kw) -> Verdict:
    return Verdict(DIMENSION, regime, float(value), formula, solver_error=_err(config), **kw)


# ---------------------------------------------------------------------------
# single-Phi sets
# ---------------------------------------------------------------------------


def classify_E1(phi: GrowthSpec, config: ClassifierConfig = ClassifierConfig()) -> Verdict:
    """a_n >= Phi(n) infinitely often."""
    e = exponents(phi, "Phi1")
    if e.B == 1:
        return Verdict(DIMENSION, "E1:B=1", 1.0, "One")
    if e.B == INF:
        return Verdict(DIMENSION, "E1:B=inf", 1.0 / (1.0 + e.b), "OneOver1PlusB")
    return _dim(s_B(e.B, config), "s_B", "E1:1<B<inf", config)


def classify_E2(phi: GrowthSpec, config: ClassifierConfig = ClassifierConfig()) -> Verdict:
    """a_n a_{n+1} >= Phi(n) infinitely often."""
    e = exponents(phi, "Phi1")
    if e.B == 1:
        return Verdict(DIMENSION, "E2:B=1", 1.0, "One")
    if e.B == INF:
        return Verdict(DIMENSION, "E2:B=inf", 1.0 / (1.0 + e.b), "OneOver1PlusB")
    return _dim(s_0(e.B, config), "s_0", "E2:1<B<inf", config)


def classify_F(phi: GrowthSpec, config: ClassifierConfig = ClassifierConfig()) -> Verdict:
    """E2(Phi) minus E1(Phi)."""
    e = exponents(phi, "Phi1")
    if e.B == 1:
        raise Unsupported("F(Phi) is only classified for B > 1")
    if e.B == INF:
        return Verdict(DIMENSION, "F:B=inf", 1.0 / (1.0 + e.b), "OneOver1PlusB")
    return _dim(s_0(e.B, config), "s_0", "F:1<B<inf", config)


# ---------------------------------------------------------------------------
# F_{B1,B2}
# ---------------------------------------------------------------------------


def _finite_regime(B1: float, B2: float, config: ClassifierConfig, prefix: str) -> Verdict:
    """Three-way split for finite B1 > 1 and 1 <= B2 <= inf."""
    if B2 <= math.sqrt(B1):
        return Verdict(
            EMPTY,
            f"{prefix}:B2<=B1^(1/2)",
            certificates=[
                {
                    "type": "theorem-case",
                    "case": "B1^(1/2) >= B2",
                    "B1": B1,
                    "B2": B2,
                    "sqrt_B1": math.sqrt(B1),
                    "reason": "a_n a_{n+1} < B2^(2n-1) <= B1^n eventually",
                }
            ],
        )
    s0 = s_0(B1, config)
    if B2 == INF:
        v = _dim(s0, "s_0", f"{prefix}:B1^s0<=B2", config)
        v.notes.append("B2 = inf with finite B1 read as the s_0 case (B1^s0 <= B2 trivially)")
        return v
    gap = math.log(B2) - s0 * math.log(B1)
    band = config.band * math.log(B1) + _err(config) * math.log(B1)
    if abs(gap) <= band:
        g = g_of(B1, B2, config)
        v = _dim(s0, "s_0", f"{prefix}:on-s0-curve", config)
        v.certificates.append(
            {"type": "branch-agreement", "s_0": s0, "g": g, "difference": abs(s0 - g)}
        )
        return v
    if gap > 0:
        return _dim(s0, "s_0", f"{prefix}:B1^s0<=B2", config)
    return _dim(g_of(B1, B2, config), "g", f"{prefix}:B1^s0>=B2>B1^(1/2)", config)


def classify_FBB(B1: float, B2: float, config: ClassifierConfig = ClassifierConfig()) -> Verdict:
    """a_n a_{n+1} >= B1^n i.o. and a_{n+1} < B2^n eventually."""
    if not (B1 > 1 and B2 > 1):
        raise ValueError("need B1, B2 > 1")
    return _finite_regime(float(B1), float(B2), config, "FBB")


# ---------------------------------------------------------------------------
# F(Phi1, Phi2)
# ---------------------------------------------------------------------------


def _log_c_interval(conditions) -> tuple[float, float] | None:
    """Feasible interval for log c from conditions "X(n) + k log c >= 0 eventually".

    Each condition is (expansions, k).  Returns None when infeasible or undecidable.
    """
    lo, hi = -INF, INF
    for exps, k in conditions:
        for x in exps:
            head = growth.LogExpansion(x.dexp, x.lin, x.logn, 0.0, x.approx)
            sgn = head.eventual_sign()
            if sgn is None:
                return None
            if sgn > 0:
                continue
            if sgn < 0:
                return None
            if x.approx:
                return None
            bound = -x.const / k
            if k > 0:
                lo = max(lo, bound)
            else:
                hi = min(hi, bound)
    return (lo, hi) if lo <= hi else None


def window_feasibility(phi1: GrowthSpec, phi2: GrowthSpec, A1: float, A2: float) -> dict | None:
    """Find c with c A1^n <= a_n < 2c A1^n, c A2^n <= a_{n+1} < 2c A2^n forcing membership.

    Conditions, all for large n:  c^2 (A1 A2)^n >= Phi1(n),  2c A2^n <= Phi2(n),
    2c A1^n <= Phi2(n-1).  Returns a certificate dict or None.
    """
    lin = growth.LogExpansion
    p1 = log_expansions(phi1)
    p2 = log_expansions(phi2)
    prod = lin(lin=math.log(A1 * A2))
    conds = [
        ([prod - f for f in p1], 2.0),
        ([f - lin(lin=math.log(A2), const=math.log(2.0)) for f in p2], -1.0),
        ([f.shift(-1) - lin(lin=math.log(A1), const=math.log(2.0)) for f in p2], -1.0),
    ]
    iv = _log_c_interval(conds)
    if iv is None:
        return None
    lo, hi = iv
    if math.isfinite(lo) and math.isfinite(hi):
        logc = 0.5 * (lo + hi)
    elif math.isfinite(lo):
        logc = lo + 1.0
    elif math.isfinite(hi):
        logc = hi - 1.0
    else:
        logc = 0.0
    return {
        "type": "constructive-subset",
        "A1": A1,
        "A2": A2,
        "c": math.exp(logc),
        "log_c_interval": [lo, hi],
        "windows": "c*A1^n <= a_n < 2c*A1^n, c*A2^n <= a_{n+1} < 2c*A2^n i.o.; a_j <= M otherwise",
    }


def _empty_from(incomp, regime: str, boundary: bool) -> Verdict:
    return Verdict(EMPTY, regime, boundary=boundary, certificates=[incomp.certificate()])


def classify_F2(phi1: GrowthSpec, phi2: GrowthSpec, config: ClassifierConfig = ClassifierConfig()) -> Verdict:
    """F(Phi1, Phi2) = E2(Phi1) minus E1(Phi2)."""
    e1 = exponents(phi1, "Phi1")
    e2 = exponents(phi2, "Phi2")
    if not e2.limit_exists:
        raise LimitMissing("log Phi2(n)/n or loglog Phi2(n)/n has no limit")
    B1, b1, B2, b2 = e1.B, e1.b, e2.B, e2.b

    if B1 < INF and B2 < INF and math.isclose(B1, B2 * B2, rel_tol=1e-12):
        return _boundary_B(phi1, phi2, B1, B2, config)
    if B1 < INF:
        if B1 == 1:
            # B2 >= 1 = B1^s0 always: case (1) with s0 = 1
            v = Verdict(DIMENSION, "F2:case1:B1^s0<=B2", 1.0, "s_0")
            v.notes.append("B1 = 1 gives s_0 = 1")
            return v
        v = _finite_regime(B1, B2, config, "F2")
        v.regime = v.regime.replace("F2:B2<=B1^(1/2)", "F2:case3:B1^(1/2)>B2")
        v.regime = v.regime.replace("F2:B1^s0<=B2", "F2:case1:B1^s0<=B2")
        v.regime = v.regime.replace("F2:B1^s0>=B2>B1^(1/2)", "F2:case2:B1^s0>=B2>B1^(1/2)")
        return v
    # B1 = inf
    if B2 < INF:
        return Verdict(
            EMPTY,
            "F2:case3:B1^(1/2)>B2",
            certificates=[
                {"type": "theorem-case", "case": "B1^(1/2) > B2, B2 finite", "B1": "inf", "B2": B2}
            ],
        )
    if b1 == INF and b2 == INF:
        inc = incompatibility_test(phi1, phi2, config.horizon)
        if inc.empty_forced:
            return _empty_from(inc, "F2:case6:b1=b2=inf", False)
        return Verdict(ZERO_OR_EMPTY, "F2:case6:b1=b2=inf", certificates=[inc.certificate()])
    if b1 < b2:
        return Verdict(DIMENSION, "F2:case4:b1<b2", 1.0 / (1.0 + b1), "OneOver1PlusB")
    if b1 > b2:
        return Verdict(
            EMPTY,
            "F2:case5:b1>b2",
            certificates=[{"type": "theorem-case", "case": "b1 > b2 >= 1", "b1": b1, "b2": b2}],
        )
    return _boundary_b(phi1, phi2, b1, config)


def _boundary_B(phi1, phi2, B1, B2, config) -> Verdict:
    regime = "F2:boundary:B1=B2^2"
    inc = incompatibility_test(phi1, phi2, config.horizon)
    if inc.empty_forced:
        return _empty_from(inc, regime, True)
    cert = window_feasibility(phi1, phi2, B2, B1 / B2) if B2 > 1 else None
    if cert is None:
        return Verdict(ZERO_OR_EMPTY, regime, boundary=True, certificates=[inc.certificate()],
                       notes=["boundary unresolved"])
    # the inner set is E(A1, A2) with A1 = B2, A1 A2 = B1
    sA = s_B(B2, config)
    g = g_of(B1, B2, config)
    v = _dim(min(sA, g), "g" if g <= sA else "MinSg", regime, config, boundary=True)
    v.certificates += [inc.certificate(), cert, {"type": "min-branches", "s_A1": sA, "g": g}]
    return v


def _boundary_b(phi1, phi2, b, config) -> Verdict:
    regime = "F2:boundary:b1=b2"
    inc = incompatibility_test(phi1, phi2, config.horizon)
    if inc.empty_forced:
        return _empty_from(inc, regime, True)
    contains = growth.eventually_le(log_expansions(phi1), log_expansions(phi2))
    if contains is True:
        v = Verdict(DIMENSION, regime, 1.0 / (1.0 + b), "OneOver1PlusB", boundary=True)
        v.certificates += [
            inc.certificate(),
            {
                "type": "contains-F(Phi1)",
                "reason": "Phi1 <= Phi2 eventually, so F(Phi1) is a subset; dim F(Phi1) = 1/(1+b1) = dim E2(Phi1)",
            },
        ]
        return v
    return Verdict(ZERO_OR_EMPTY, regime, boundary=True, certificates=[inc.certificate()],
                   notes=["boundary unresolved"])


# ---------------------------------------------------------------------------
# E(A1, A2) and auxiliary formulas
# ---------------------------------------------------------------------------


def dim_EA(A1: float, A2: float, config: ClassifierConfig = ClassifierConfig()) -> Verdict:
    """dim E(A1, A2) = min{s_{A1}, g_{A1 A2, A1}}."""
    if not A1 > 1:
        raise ValueError("need A1 > 1")
    if not A1 * A2 > 1:
        raise ValueError("need A1 * A2 > 1")
    sA = s_B(A1, config)
    g = g_of(A1 * A2, A1, config)
    v = _dim(min(sA, g), "MinSg", "EA", config)
    v.certificates.append({"type": "min-branches", "s_A1": sA, "g": g, "attained": "s" if sA <= g else "g"})
    return v


def dim_luczak(b: float) -> float:
    """Dimension 1/(b+1) of {a_n >= c^(b^n)} (i.o. or for all n)."""
    if not b > 1:
        raise ValueError("need b > 1")
    return 1.0 / (b + 1.0)


@dataclass(frozen=True)
class FLWWResult:
    value: float
    numeric: float
    horizon: int


def dim_flww(s_seq, horizon: int = 60, scale: float = 1.0) -> FLWWResult:
    """liminf log(s_1..s_n) / (2 log(s_1..s_n) + log s_{n+1}) for s_n = scale * Phi(n).

    Closed form: 1/(1+b) for doubly exponential growth, 1/2 otherwise.  The
    ratio is also evaluated at n = horizon as a numeric confirmation.
    """
    if isinstance(s_seq, (Table, int, float)) or not hasattr(s_seq, "__dataclass_fields__"):
        raise Unsupported("s_n must be one of the symbolic growth families")
    if isinstance(s_seq, (DoublyExp, ShiftedDoublyExp)):
        value = 1.0 / (1.0 + s_seq.b)
        # keep b**n finite
        horizon = min(horizon, int(600 / math.log(s_seq.b)))
    elif isinstance(s_seq, (Exponential, PowerLaw)):
        value = 0.5
    else:
        raise Unsupported(f"unsupported family {type(s_seq).__name__}")
    logs = [math.log(scale) + growth.log_eval(s_seq, n) for n in range(1, horizon + 2)]
    head = sum(logs[:-1])
    numeric = head / (2 * head + logs[-1])
    return FLWWResult(value, numeric, horizon)
