"""Symbolic growth functions Phi, their exponents (B, b) and the emptiness test.

Each family has an exact asymptotic expansion of log Phi(n) on the scales

    b**n  >>  n  >>  log n  >>  1,

which makes "eventually f(n) <= g(n)" decidable by comparing leading
coefficients.  Text form (used by the CLI)::

    pow:a=2   exp:B=4,c=1   dexp:b=3,beta=1   dexpshift:b=2,beta=1,k=-1
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

INF = math.inf
# relative tolerance for treating two expansion coefficients as equal
COEF_RTOL = 1e-12


class GrowthSpecError(ValueError):
    pass


class TableTailMissing(GrowthSpecError):
    pass


@dataclass(frozen=True)
class PowerLaw:
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise GrowthSpecError("pow requires a > 0")


@dataclass(frozen=True)
class Exponential:
    B: float
    c: float = 1.0

    def __post_init__(self):
        if not self.B > 1 or not self.c > 0:
            raise GrowthSpecError("exp requires B > 1 and c > 0")


@dataclass(frozen=True)
class DoublyExp:
    b: float
    beta: float = 1.0

    def __post_init__(self):
        if not self.b > 1 or not self.beta > 0:
            raise GrowthSpecError("dexp requires b > 1 and beta > 0")


@dataclass(frozen=True)
class ShiftedDoublyExp:
    b: float
    beta: float = 1.0
    k: int = 0

    def __post_init__(self):
        if not self.b > 1 or not self.beta > 0:
            raise GrowthSpecError("dexpshift requires b > 1 and beta > 0")
        if int(self.k) != self.k:
            raise GrowthSpecError("dexpshift requires integer k")


@dataclass(frozen=True)
class Table:
    """Explicit values for small n plus a declared symbolic tail.

    With ``tail_alt`` set, the tail alternates: ``tail`` on even n and
    ``tail_alt`` on odd n (an oscillating tail).
    """

    samples: tuple[tuple[int, float], ...] = ()
    tail: "GrowthSpec | None" = None
    tail_alt: "GrowthSpec | None" = None

    def tails(self) -> list["GrowthSpec"]:
        if self.tail is None:
            raise TableTailMissing("table spec has no declared tail family")
        return [self.tail] if self.tail_alt is None else [self.tail, self.tail_alt]


GrowthSpec = Union[PowerLaw, Exponential, DoublyExp, ShiftedDoublyExp, Table]


@dataclass(frozen=True)
class GrowthExponents:
    B: float
    b: float
    limit_kind: str
    limit_exists: bool = True


def _base_exponents(spec) -> tuple[float, float]:
    if isinstance(spec, PowerLaw):
        return 1.0, 1.0
    if isinstance(spec, Exponential):
        return float(spec.B), 1.0
    if isinstance(spec, (DoublyExp, ShiftedDoublyExp)):
        return INF, float(spec.b)
    raise GrowthSpecError(f"unsupported growth spec {spec!r}")


def exponents(spec: GrowthSpec, role: str = "Phi1") -> GrowthExponents:
    """Exact (B, b) with log B = liminf log Phi(n)/n and log b = liminf loglog Phi(n)/n.

    For ``role="Phi2"`` the limits must genuinely exist; an oscillating table
    tail with distinct exponents yields ``limit_exists=False``.
    """
    if role not in ("Phi1", "Phi2"):
        raise ValueError("role must be 'Phi1' or 'Phi2'")
    kind = "liminf" if role == "Phi1" else "lim"
    if isinstance(spec, Table):
        pairs = [_base_exponents(t) for t in spec.tails()]
        B = min(p[0] for p in pairs)
        # b only matters when B is infinite; take the liminf among infinite-B branches
        b = min(p[1] for p in pairs if p[0] == B)
        exists = len(set(pairs)) == 1
        return GrowthExponents(B, b, kind, exists if role == "Phi2" else True)
    B, b = _base_exponents(spec)
    return GrowthExponents(B, b, kind, True)


def log_eval(spec: GrowthSpec, n: int) -> float:
    """log Phi(n), evaluated directly in log-space."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(spec, PowerLaw):
        return spec.a * math.log(n)
    if isinstance(spec, Exponential):
        return math.log(spec.c) + n * math.log(spec.B)
    if isinstance(spec, DoublyExp):
        return spec.beta * spec.b**n
    if isinstance(spec, ShiftedDoublyExp):
        return spec.beta * spec.b ** (n + spec.k)
    if isinstance(spec, Table):
        for m, v in spec.samples:
            if m == n:
                return math.log(v)
        tails = spec.tails()
        return log_eval(tails[n % 2] if len(tails) == 2 else tails[0], n)
    raise GrowthSpecError(f"unsupported growth spec {spec!r}")


# ---------------------------------------------------------------------------
# asymptotic expansions of log Phi(n)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogExpansion:
    """sum_b dexp[b] * b**n + lin * n + logn * log n + const.

    ``approx`` marks expansions whose log n coefficient came from a shift
    (log(n+k) = log n + o(1)); their constant term is then not exact.
    """

    dexp: tuple[tuple[float, float], ...] = ()
    lin: float = 0.0
    logn: float = 0.0
    const: float = 0.0
    approx: bool = False

    def __add__(self, other: "LogExpansion") -> "LogExpansion":
        d: dict[float, float] = dict(self.dexp)
        for b, c in other.dexp:
            d[b] = d.get(b, 0.0) + c
        return LogExpansion(
            tuple(sorted(d.items())),
            self.lin + other.lin,
            self.logn + other.logn,
            self.const + other.const,
            self.approx or other.approx,
        )

    def __neg__(self) -> "LogExpansion":
        return LogExpansion(
            tuple((b, -c) for b, c in self.dexp), -self.lin, -self.logn, -self.const, self.approx
        )

    def __sub__(self, other: "LogExpansion") -> "LogExpansion":
        return self + (-other)

    def shift(self, k: int) -> "LogExpansion":
        """Expansion of n -> f(n + k)."""
        return LogExpansion(
            tuple((b, c * b**k) for b, c in self.dexp),
            self.lin,
            self.logn,
            self.const + self.lin * k,
            self.approx or (self.logn != 0.0 and k != 0),
        )

    def eventual_sign(self) -> int | None:
        """Sign of the function for all large n; None when undecidable."""
        scale = max(
            [abs(c) for _, c in self.dexp] + [abs(self.lin), abs(self.logn), abs(self.const), 1.0]
        )
        tol = COEF_RTOL * scale
        for _, c in sorted(self.dexp, reverse=True):
            if abs(c) > tol:
                return 1 if c > 0 else -1
        for c in (self.lin, self.logn):
            if abs(c) > tol:
                return 1 if c > 0 else -1
        if self.approx:
            return None
        if abs(self.const) > tol:
            return 1 if self.const > 0 else -1
        return 0


def log_expansions(spec: GrowthSpec) -> list[LogExpansion]:
    """One expansion per tail branch (two for an oscillating table)."""
    if isinstance(spec, PowerLaw):
        return [LogExpansion(logn=spec.a)]
    if isinstance(spec, Exponential):
        return [LogExpansion(lin=math.log(spec.B), const=math.log(spec.c))]
    if isinstance(spec, DoublyExp):
        return [LogExpansion(dexp=((spec.b, spec.beta),))]
    if isinstance(spec, ShiftedDoublyExp):
        return [LogExpansion(dexp=((spec.b, spec.beta * spec.b**spec.k),))]
    if isinstance(spec, Table):
        out = []
        for t in spec.tails():
            out.extend(log_expansions(t))
        return out
    raise GrowthSpecError(f"unsupported growth spec {spec!r}")


def eventually_le(lhs: list[LogExpansion], rhs: list[LogExpansion]) -> bool | None:
    """Whether every lhs branch is eventually <= every rhs branch (None if undecidable)."""
    verdict = True
    for f in lhs:
        for g in rhs:
            sgn = (g - f).eventual_sign()
            if sgn is None:
                verdict = None
            elif sgn < 0:
                return False
    return verdict


# ---------------------------------------------------------------------------
# finite-n incompatibility (emptiness) test
# ---------------------------------------------------------------------------

EMPTY_FORCED = "EmptyForced"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Incompatibility:
    verdict: str
    n0: int | None
    horizon: int
    reason: str
    detail: dict = field(default_factory=dict)

    @property
    def empty_forced(self) -> bool:
        return self.verdict == EMPTY_FORCED

    def certificate(self) -> dict:
        return {
            "type": "incompatibility",
            "verdict": self.verdict,
            "inequality": "log Phi2(n) + log Phi2(n-1) <= log Phi1(n)",
            "n0": self.n0,
            "horizon": self.horizon,
            "reason": self.reason,
        }


def incompatibility_test(phi1: GrowthSpec, phi2: GrowthSpec, horizon: int = 50) -> Incompatibility:
    """EmptyForced iff Phi2(n) Phi2(n-1) <= Phi1(n) on [n0, horizon] and symbolically for all n >= horizon.

    a_{n+1} < Phi2(n) for all large n bounds a_n a_{n+1} by Phi2(n-1) Phi2(n),
    so the condition a_n a_{n+1} >= Phi1(n) can then hold only finitely often.
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    lhs = [f + g.shift(-1) for f in log_expansions(phi2) for g in log_expansions(phi2)]
    sym = eventually_le(lhs, log_expansions(phi1))
    if sym is not True:
        why = "symbolically undecidable" if sym is None else "inequality fails for all large n"
        return Incompatibility(INCONCLUSIVE, None, horizon, why)

    def holds(n: int) -> bool:
        rhs = log_eval(phi1, n)
        return log_eval(phi2, n) + log_eval(phi2, n - 1) <= rhs + 1e-12 * max(1.0, abs(rhs))

    if not holds(horizon):
        return Incompatibility(INCONCLUSIVE, None, horizon, "persistence starts beyond horizon")
    n0 = horizon
    while n0 > 2 and holds(n0 - 1):
        n0 -= 1
    return Incompatibility(EMPTY_FORCED, n0, horizon, "verified on [n0, horizon]; leading terms persist")


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------

_FAMILIES = {
    "pow": (PowerLaw, ("a",)),
    "exp": (Exponential, ("B", "c")),
    "dexp": (DoublyExp, ("b", "beta")),
    "dexpshift": (ShiftedDoublyExp, ("b", "beta", "k")),
}


def _num(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise GrowthSpecError(f"bad number {text!r}") from exc


def parse_spec(text: str) -> GrowthSpec:
    """Parse ``family:key=value,...``; values may be decimals or fractions like 1/3."""
    head, sep, body = text.strip().partition(":")
    if head not in _FAMILIES:
        raise GrowthSpecError(f"unknown growth family {head!r}")
    cls, keys = _FAMILIES[head]
    kwargs = {}
    for item in filter(None, (p.strip() for p in body.split(","))) if sep else ():
        key, eq, val = item.partition("=")
        if not eq or key not in keys:
            raise GrowthSpecError(f"bad parameter {item!r} for {head}")
        if key in kwargs:
            raise GrowthSpecError(f"duplicate parameter {key!r}")
        if key == "k":
            try:
                kwargs[key] = int(val)
            except ValueError as exc:
                raise GrowthSpecError(f"k must be an integer, got {val!r}") from exc
        else:
            kwargs[key] = _num(val)
    if keys[0] not in kwargs:
        raise GrowthSpecError(f"{head} requires {keys[0]}")
    return cls(**kwargs)


def format_spec(spec: GrowthSpec) -> str:
    """Canonical text form; ``parse_spec(format_spec(s)) == s`` bit-exactly."""
    for name, (cls, keys) in _FAMILIES.items():
        if type(spec) is cls:
            parts = []
            for key in keys:
                v = getattr(spec, key)
                parts.append(f"{key}={v}" if key == "k" else f"{key}={float(v)!r}")
            return f"{name}:" + ",".join(parts)
    raise GrowthSpecError(f"{type(spec).__name__} has no text form")
