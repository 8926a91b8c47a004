"""Exact rational lines, predicates, snapshots, and affine transforms.

All coordinates are `fractions.Fraction`; nothing is ever rounded.  Lines are
stored as a*x + b*y = c normalized to b = 1, so the slope is -a and vertical
lines are rejected outright.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import DegenerateSweep, ParallelLines, VerticalLine

Rational = Fraction

RationalLike = Union[Fraction, int, str]


def rat(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions, or "num/den" strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    """Serialize as "num/den", omitting the denominator when it is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    if sep:
        return Fraction(int(num), int(den))
    return Fraction(int(num))


class _Infinity:
    """Tagged endpoint marker for unbounded snapshot intervals."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self) -> str:
        return "+inf" if self.sign > 0 else "-inf"

    def __eq__(self, other) -> bool:
        return isinstance(other, _Infinity) and other.sign == self.sign

    def __hash__(self) -> int:
        return hash(("_Infinity", self.sign))


NEG_INF = _Infinity(-1)
POS_INF = _Infinity(+1)

Endpoint = Union[Fraction, _Infinity]


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    def to_json(self) -> dict:
        return {"x": format_rational(self.x), "y": format_rational(self.y)}


@dataclass(frozen=True)
class LineEq:
    """The line a*x + b*y = c with b normalized to 1 (slope -a, intercept c)."""

    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def from_coeffs(cls, a: RationalLike, b: RationalLike, c: RationalLike) -> "LineEq":
        a, b, c = rat(a), rat(b), rat(c)
        if b == 0:
            raise VerticalLine(f"vertical line {a}*x = {c} is not representable")
        return cls(a / b, Fraction(1), c / b)

    @classmethod
    def from_slope_intercept(cls, slope: RationalLike, intercept: RationalLike) -> "LineEq":
        return cls(-rat(slope), Fraction(1), rat(intercept))

    @property
    def slope(self) -> Fraction:
        return -self.a

    @property
    def intercept(self) -> Fraction:
        return self.c

    def y_at(self, x: RationalLike) -> Fraction:
        return self.c - self.a * rat(x)

    def contains(self, p: Point) -> bool:
        return self.a * p.x + self.b * p.y == self.c

    def to_json(self) -> dict:
        return {
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "c": format_rational(self.c),
        }

    @classmethod
    def from_json(cls, payload: dict) -> "LineEq":
        return cls.from_coeffs(payload["a"], payload["b"], payload["c"])


@dataclass(frozen=True)
class Snapshot:
    """Vertical order of the lines (top to bottom) over an open x-interval."""

    x_lo: Endpoint
    x_hi: Endpoint
    order: tuple[int, ...]

    def sample_x(self) -> Fraction:
        """An exact x strictly inside the interval."""
        lo_inf = isinstance(self.x_lo, _Infinity)
        hi_inf = isinstance(self.x_hi, _Infinity)
        if lo_inf and hi_inf:
            return Fraction(0)
        if lo_inf:
            return self.x_hi - 1
        if hi_inf:
            return self.x_lo + 1
        return (self.x_lo + self.x_hi) / 2


def intersect(l1: LineEq, l2: LineEq) -> Point:
    """Exact crossing point of two non-parallel lines."""
    if l1.a == l2.a:
        raise ParallelLines(f"equal slopes {format_rational(l1.slope)}")
    x = (l1.c - l2.c) / (l1.a - l2.a)
    return Point(x, l1.c - l1.a * x)


def side(line: LineEq, p: Point) -> int:
    """Sign of c - a*x - b*y; +1 means p is strictly below the line."""
    value = line.c - line.a * p.x - line.b * p.y
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def y_order_at(lines: Sequence[LineEq], x: RationalLike) -> tuple[int, ...]:
    """Indices sorted by y-value at x, top to bottom; ties broken by slope then index.

    At a crossing the two lines tie; the deterministic tie-break keeps the
    function total, but snapshot construction only calls it off crossings.
    """
    x = rat(x)
    keyed = sorted(
        range(len(lines)),
        key=lambda i: (-lines[i].y_at(x), lines[i].a, i),
    )
    return tuple(keyed)


def crossing_xs(lines: Sequence[LineEq]) -> list[Fraction]:
    """Sorted x-coordinates of all pairwise crossings (with multiplicity)."""
    xs = []
    for i, j in itertools.combinations(range(len(lines)), 2):
        xs.append(intersect(lines[i], lines[j]).x)
    xs.sort()
    return xs


def snapshots(lines: Sequence[LineEq]) -> list[Snapshot]:
    """All C(n,2)+1 vertical orders, left to right.

    Requires pairwise-distinct crossing x-coordinates; raises DegenerateSweep
    otherwise because two simultaneous transpositions have no defined order.
    """
    xs = crossing_xs(lines)
    for left, right in zip(xs, xs[1:]):
        if left == right:
            raise DegenerateSweep(f"two crossings share x = {format_rational(left)}")
    result: list[Snapshot] = []
    bounds: list[Endpoint] = [NEG_INF, *xs, POS_INF]
    for lo, hi in zip(bounds, bounds[1:]):
        snap = Snapshot(lo, hi, ())
        order = y_order_at(lines, snap.sample_x())
        result.append(Snapshot(lo, hi, order))
    return result


def apply_y_map(
    lines: Sequence[LineEq],
    alpha: RationalLike,
    beta: RationalLike,
    gamma: RationalLike,
) -> list[LineEq]:
    """Map points by (x, y) -> (x, alpha*y + beta*x + gamma) with alpha > 0.

    Order-preserving in y at every x, so snapshot sequences are preserved and
    crossing x-coordinates are unchanged.
    """
    alpha, beta, gamma = rat(alpha), rat(beta), rat(gamma)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    out = []
    for line in lines:
        slope = alpha * line.slope + beta
        intercept = alpha * line.intercept + gamma
        out.append(LineEq.from_slope_intercept(slope, intercept))
    return out


def flatten(
    lines: Sequence[LineEq],
    slope_low: RationalLike,
    slope_high: RationalLike,
    y_bound: RationalLike,
    below: bool = True,
) -> list[LineEq]:
    """Order-preserving map squeezing all slopes into (slope_low, slope_high).

    Every pairwise crossing lands strictly below y_bound (above when
    ``below`` is false).  The snapshot permutation sequence is preserved
    exactly.  Parameters always exist: alpha scales the slope spread under
    the band width, beta centers the band, gamma translates the crossings.
    """
    slope_low, slope_high, y_bound = rat(slope_low), rat(slope_high), rat(y_bound)
    if not slope_low < slope_high:
        raise ValueError("slope_low must be less than slope_high")
    if not lines:
        return []
    slopes = [line.slope for line in lines]
    span = max(slopes) - min(slopes)
    mid = (max(slopes) + min(slopes)) / 2
    center = (slope_low + slope_high) / 2
    alpha = (slope_high - slope_low) / (2 * (span + 1))
    beta = center - alpha * mid

    crossing_vals = []
    for i, j in itertools.combinations(range(len(lines)), 2):
        p = intersect(lines[i], lines[j])
        crossing_vals.append(alpha * p.y + beta * p.x)
    if not crossing_vals:
        gamma = Fraction(0)
    elif below:
        gamma = y_bound - max(crossing_vals) - 1
    else:
        gamma = y_bound - min(crossing_vals) + 1
    return apply_y_map(lines, alpha, beta, gamma)


def reflect_y(lines: Sequence[LineEq]) -> list[LineEq]:
    """Reflect about y = 0: y = m*x + t becomes y = -m*x - t.

    An involution; every snapshot permutation is reversed.
    """
    return [LineEq.from_slope_intercept(-line.slope, -line.intercept) for line in lines]


@dataclass(frozen=True)
class SimplicityReport:
    """Result of is_simple: ok, or the first violation found."""

    ok: bool
    violation: str | None = None
    lines: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"{self.violation} involving lines {self.lines}"


def is_simple(lines: Sequence[LineEq], strict: bool = False) -> SimplicityReport:
    """Check for duplicates, parallels, concurrences, and (strict) shared crossing x."""
    for i, j in itertools.combinations(range(len(lines)), 2):
        if lines[i] == lines[j]:
            return SimplicityReport(False, "duplicate line", (i, j))
        if lines[i].a == lines[j].a:
            return SimplicityReport(False, "parallel pair", (i, j))
    seen_points: dict[Point, tuple[int, int]] = {}
    seen_xs: dict[Fraction, tuple[int, int]] = {}
    for i, j in itertools.combinations(range(len(lines)), 2):
        p = intersect(lines[i], lines[j])
        if p in seen_points:
            other = seen_points[p]
            triple = tuple(sorted(set(other + (i, j))))
            return SimplicityReport(False, "concurrent triple", triple)
        seen_points[p] = (i, j)
        if strict:
            if p.x in seen_xs:
                other = seen_xs[p.x]
                return SimplicityReport(
                    False, "shared crossing x", tuple(sorted(set(other + (i, j))))
                )
            seen_xs[p.x] = (i, j)
    return SimplicityReport(True)
