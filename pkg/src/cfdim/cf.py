"""Exact continued-fraction machinery: continuants, cylinders, Gauss map.

Words are plain tuples of positive ints.  All arithmetic on convergents and
cylinder endpoints is exact (Python ints / ``fractions.Fraction``); the only
floating values are the log-space shadows of ``q_n`` used by the sum modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

Word = tuple[int, ...]


class InvalidWord(ValueError):
    pass


def as_word(digits: Sequence[int]) -> Word:
    word = tuple(int(a) for a in digits)
    for a in word:
        if a < 1:
            raise InvalidWord(f"partial quotients must be >= 1, got {a}")
    return word


class Convergent(NamedTuple):
    p: int
    q: int


def continuants(word: Sequence[int]) -> list[Convergent]:
    """Convergents (p_k, q_k) for k = 1..n.

    Seeds are p_{-1}=1, q_{-1}=0, p_0=0, q_0=1.

    >>> [tuple(c) for c in continuants((2, 2, 2))]
    [(1, 2), (2, 5), (5, 12)]
    """
    word = as_word(word)
    p_prev, q_prev, p, q = 1, 0, 0, 1
    out = []
    for a in word:
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        out.append(Convergent(p, q))
    return out


def last_two(word: Sequence[int]) -> tuple[int, int, int, int]:
    """Return (p_{n-1}, q_{n-1}, p_n, q_n); for the empty word (1, 0, 0, 1)."""
    p_prev, q_prev, p, q = 1, 0, 0, 1
    for a in as_word(word):
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
    return p_prev, q_prev, p, q


def log_q(word: Sequence[int]) -> float:
    """Natural log of q_n, carried in log-space via q_{k+1} = q_k (a + q_{k-1}/q_k)."""
    lq = 0.0
    r = 0.0
    for a in as_word(word):
        step = a + r
        lq += math.log(step)
        r = 1.0 / step
    return lq


def cf_value(word: Sequence[int]) -> Fraction:
    """The nested fraction [0; a_1, ..., a_n] = p_n / q_n."""
    _, _, p, q = last_two(word)
    return Fraction(p, q)


@dataclass(frozen=True)
class CylinderInterval:
    left: Fraction
    right: Fraction
    closed_side: str  # "left" or "right"
    order: int

    @property
    def length(self) -> Fraction:
        return self.right - self.left

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        if self.closed_side == "left":
            return self.left <= x < self.right
        return self.left < x <= self.right


def cylinder(word: Sequence[int]) -> CylinderInterval:
    """The order-n cylinder I_n(a_1..a_n).

    Endpoints are p_n/q_n and (p_n+p_{n-1})/(q_n+q_{n-1}); closed at p_n/q_n,
    which is the left end for even n and the right end for odd n.
    """
    word = as_word(word)
    n = len(word)
    if n == 0:
        return CylinderInterval(Fraction(0), Fraction(1), "left", 0)
    p_prev, q_prev, p, q = last_two(word)
    a = Fraction(p, q)
    b = Fraction(p + p_prev, q + q_prev)
    if n % 2 == 0:
        return CylinderInterval(a, b, "left", n)
    return CylinderInterval(b, a, "right", n)


def gauss_map(x: Fraction) -> Fraction:
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    inv = 1 / x
    return inv - math.floor(inv)


class Expansion(NamedTuple):
    word: Word
    terminated: bool


def cf_expand(x, depth: int) -> Expansion:
    """First ``depth`` partial quotients of a rational x in [0, 1).

    If the Gauss orbit hits 0 first, the shorter (canonical) word is returned
    with ``terminated=True``.
    """
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    digits = []
    for _ in range(depth):
        if x == 0:
            return Expansion(tuple(digits), True)
        inv = 1 / x
        a = math.floor(inv)
        digits.append(a)
        x = inv - a
    return Expansion(tuple(digits), x == 0)


def quasi_mult_ratio(u: Sequence[int], v: Sequence[int]) -> Fraction:
    """q_{n+m}(uv) / (q_n(u) q_m(v)); always in [1, 2]."""
    u, v = as_word(u), as_word(v)
    if not u or not v:
        raise InvalidWord("both words must be non-empty")
    return Fraction(last_two(u + v)[3], last_two(u)[3] * last_two(v)[3])


def basic_interval(word: Sequence[int], lo: int, hi: int) -> tuple[Fraction, Fraction]:
    """Hull of the sub-cylinders I_{n+1}(word, a) for lo <= a <= hi, as (left, right)."""
    p_prev, q_prev, p, q = last_two(word)
    e1 = Fraction(lo * p + p_prev, lo * q + q_prev)
    e2 = Fraction((hi + 1) * p + p_prev, (hi + 1) * q + q_prev)
    return (e1, e2) if e1 < e2 else (e2, e1)
