"""Exact directions on the circle.

Angles are stored as turn fractions ``numerator / 2**exponent``; one full turn
is ``1``. Nothing in this module touches floating point except
:attr:`DyadicAngle.radians`, the single conversion used by the grid code.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "Arc",
    "DiscrepancyResult",
    "DyadicAngle",
    "discrepancy",
    "gap",
    "vdc_angle",
    "vdc_prefix",
]


@dataclass(frozen=True, order=True)
class DyadicAngle:
    """The angle ``2*pi * numerator / 2**exponent``, reduced and normalised."""

    numerator: int
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")
        p, k = self.numerator % (1 << self.exponent), self.exponent
        if p == 0:
            k = 0
        else:
            tz = (p & -p).bit_length() - 1
            p >>= tz
            k -= tz
        object.__setattr__(self, "numerator", p)
        object.__setattr__(self, "exponent", k)

    @classmethod
    def from_fraction(cls, turns) -> DyadicAngle:
        turns = Fraction(turns)
        den = turns.denominator
        if den & (den - 1):
            raise ValueError(f"{turns} does not have a power-of-two denominator")
        return cls(turns.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> DyadicAngle:
        """Read ``p``, ``p/q`` or ``p/2^k`` as a fraction of a turn."""
        text = text.strip()
        m = re.fullmatch(r"(-?\d+)\s*/\s*2\^(\d+)", text)
        if m:
            return cls.from_fraction(Fraction(int(m.group(1)), 1 << int(m.group(2))))
        m = re.fullmatch(r"(-?\d+)(?:\s*/\s*(\d+))?", text)
        if not m:
            raise ValueError(f"not an exact turn fraction: {text!r}")
        return cls.from_fraction(Fraction(int(m.group(1)), int(m.group(2) or 1)))

    @property
    def denominator(self) -> int:
        return 1 << self.exponent

    @property
    def turns(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def radians(self) -> float:
        return 2.0 * math.pi * (self.numerator / self.denominator)

    @property
    def quarter_turns(self) -> int | None:
        """Number of quarter turns if the angle is a multiple of pi/2."""
        if self.exponent > 2:
            return None
        return self.numerator << (2 - self.exponent)

    def __neg__(self) -> DyadicAngle:
        return DyadicAngle(-self.numerator, self.exponent)

    def __add__(self, other: DyadicAngle) -> DyadicAngle:
        k = max(self.exponent, other.exponent)
        return DyadicAngle(
            (self.numerator << (k - self.exponent)) + (other.numerator << (k - other.exponent)), k
        )

    def __sub__(self, other: DyadicAngle) -> DyadicAngle:
        return self + (-other)

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"


ZERO = DyadicAngle(0, 0)


def vdc_angle(n: int) -> DyadicAngle:
    """Van der Corput direction: the turn fraction is ``n`` bit-reversed."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    k = n.bit_length()
    rev = int(format(n, "b")[::-1], 2) if n else 0
    return DyadicAngle(rev, k)


def vdc_prefix(count: int) -> list[DyadicAngle]:
    return [vdc_angle(i) for i in range(count)]


def _symmetric_turn(x: Fraction) -> Fraction:
    # reduce into (-1/2, 1/2]
    x = x - math.floor(x)
    if x > Fraction(1, 2):
        x -= 1
    return x


def gap(n: int) -> Fraction:
    """Signed increment ``theta_n - theta_{n-1}`` in turns, reduced into (-1/2, 1/2]."""
    if n < 1:
        raise ValueError("gap(n) needs n >= 1")
    return _symmetric_turn(vdc_angle(n).turns - vdc_angle(n - 1).turns)


# -- discrepancy -------------------------------------------------------------

@dataclass(frozen=True)
class Arc:
    """Counter-clockwise arc from ``start`` to ``end``.

    When ``start == end`` the arc is the single point (both ends closed) or the
    circle with that point removed (both ends open).
    """

    start: DyadicAngle
    end: DyadicAngle
    start_closed: bool
    end_closed: bool

    @property
    def length(self) -> Fraction:
        if self.start == self.end:
            return Fraction(0) if (self.start_closed or self.end_closed) else Fraction(1)
        return (self.end.turns - self.start.turns) % 1

    def contains(self, angle: DyadicAngle) -> bool:
        a, b, x = self.start.turns, self.end.turns, angle.turns
        if x == a:
            return self.start_closed
        if x == b:
            return self.end_closed
        if a == b:
            return not (self.start_closed or self.end_closed)
        return 0 < (x - a) % 1 < (b - a) % 1

    def deviation(self, angles) -> Fraction:
        """``|#{points in arc}/N - length|`` as an exact rational."""
        angles = list(angles)
        count = sum(1 for a in angles if self.contains(a))
        return abs(Fraction(count, len(angles)) - self.length)


@dataclass(frozen=True)
class DiscrepancyResult:
    value: Fraction
    witness_arc: Arc
    n_points: int


def discrepancy(angles) -> DiscrepancyResult:
    """Exact arc discrepancy of a finite point set on the circle.

    Every ordered pair of distinct point positions is tried as the endpoints of
    a counter-clockwise arc, with closed ends (maximal excess count) and open
    ends (maximal deficit); mixed open/closed ends never beat both of these.
    Coincident endpoints give the single point and its complement. The
    maximum over all of them is the supremum over arcs.
    """
    angles = list(angles)
    if not angles:
        raise ValueError("discrepancy of an empty point set")
    N = len(angles)
    E = max(a.exponent for a in angles)
    scale = 1 << E
    pos = sorted(a.numerator << (E - a.exponent) for a in angles)
    uniq, mult = np.unique(np.array(pos, dtype=object), return_counts=True)
    K = len(uniq)
    exact_ints = N * scale < (1 << 62)
    dtype = np.int64 if exact_ints else object
    q = np.array([int(x) for x in uniq], dtype=dtype)
    m = np.array([int(x) for x in mult], dtype=dtype)
    # cumulative multiplicity on the doubled circle: cum[t] = sum m[0:t]
    m2 = np.concatenate([m, m])
    cum = np.concatenate([np.zeros(1, dtype=dtype), np.cumsum(m2)]).astype(dtype)

    # single point, or the circle minus a point: deviation mult/N either way
    best_num = int(m.max()) * scale
    best = (int(np.argmax(m)), int(np.argmax(m)), True)

    offsets = np.arange(1, K, dtype=np.int64)
    for i in range(K):
        if K == 1:
            break
        j = i + offsets                      # positions on the doubled circle
        length = (q[j % K] - q[i]) % scale   # arc length times scale
        interior = cum[j] - cum[i + 1]       # points strictly inside
        closed = interior + m[i] + m[j % K]
        excess = closed * scale - N * length
        deficit = N * length - interior * scale
        k_ex = int(np.argmax(excess))
        k_de = int(np.argmax(deficit))
        if int(excess[k_ex]) > best_num:
            best_num = int(excess[k_ex])
            best = (i, int(j[k_ex] % K), True)
        if int(deficit[k_de]) > best_num:
            best_num = int(deficit[k_de])
            best = (i, int(j[k_de] % K), False)

    i, j, closed = best
    arc = Arc(
        DyadicAngle(int(q[i]), E),
        DyadicAngle(int(q[j]), E),
        closed,
        closed,
    )
    return DiscrepancyResult(Fraction(best_num, N * scale), arc, N)
