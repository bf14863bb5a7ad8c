"""Exact rational geometry kernel.

Every coordinate is a :class:`fractions.Fraction`; no predicate in this module
ever touches a float.  Intersection routines return ``None`` for an empty
intersection, a :class:`Point` for a single point, and a :class:`Segment` (or a
:class:`Ray` when the overlap is unbounded) for a collinear overlap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

Rational = Fraction
Number = Union[int, Fraction]


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def __str__(self):
        return format_point(self)


def point(x: Number, y: Number) -> Point:
    """Build a point, coercing ints (and strings like ``"3/4"``) to Fraction."""
    return Point(Fraction(x), Fraction(y))


@dataclass(frozen=True)
class Segment:
    p: Point
    q: Point

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError(f"degenerate segment at {self.p}")

    @property
    def direction(self) -> tuple[Fraction, Fraction]:
        return (self.q.x - self.p.x, self.q.y - self.p.y)

    def reversed(self) -> "Segment":
        return Segment(self.q, self.p)

    def at(self, t: Fraction) -> Point:
        dx, dy = self.direction
        return Point(self.p.x + t * dx, self.p.y + t * dy)

    def supporting_line(self) -> "Ray":
        return Ray(self.p, self.direction)


@dataclass(frozen=True)
class Ray:
    """Half-line ``origin + t * direction`` for ``t >= 0``.

    Operations that talk about supporting lines (``line_intersect``) read the
    same object bidirectionally.
    """

    origin: Point
    direction: tuple[Fraction, Fraction]

    def __post_init__(self):
        dx, dy = self.direction
        if dx == 0 and dy == 0:
            raise ValueError("ray direction must be non-zero")

    def complement(self) -> "Ray":
        dx, dy = self.direction
        return Ray(self.origin, (-dx, -dy))

    def at(self, t: Fraction) -> Point:
        dx, dy = self.direction
        return Point(self.origin.x + t * dx, self.origin.y + t * dy)


Intersection = Optional[Union[Point, Segment, Ray]]


def cross(ux, uy, vx, vy):
    return ux * vy - uy * vx


def sign(v) -> int:
    return (v > 0) - (v < 0)


def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of ``(b - a) x (c - a)``: +1 counterclockwise, -1 clockwise, 0 collinear."""
    return sign(cross(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y))


def _param_range(lo, hi, t0, scale):
    """Image of the interval [lo, hi] under s -> t0 + s*scale (None = unbounded)."""
    a = None if lo is None else t0 + lo * scale
    b = None if hi is None else t0 + hi * scale
    if scale < 0:
        a, b = b, a
    return a, b


def _intersect_param(o1, d1, lo1, hi1, o2, d2, lo2, hi2) -> Intersection:
    """Intersect ``o1 + t d1, t in [lo1, hi1]`` with ``o2 + s d2, s in [lo2, hi2]``.

    ``None`` bounds are infinite.
    """
    wx, wy = o2.x - o1.x, o2.y - o1.y
    denom = cross(d1[0], d1[1], d2[0], d2[1])
    if denom != 0:
        t = cross(wx, wy, d2[0], d2[1]) / denom
        s = cross(wx, wy, d1[0], d1[1]) / denom
        if lo1 is not None and t < lo1 or hi1 is not None and t > hi1:
            return None
        if lo2 is not None and s < lo2 or hi2 is not None and s > hi2:
            return None
        return Point(o1.x + t * d1[0], o1.y + t * d1[1])

    if cross(wx, wy, d1[0], d1[1]) != 0:
        return None  # parallel, distinct lines

    # collinear: express the second object in the first one's parameter
    norm = d1[0] * d1[0] + d1[1] * d1[1]
    t0 = Fraction(wx * d1[0] + wy * d1[1]) / norm
    scale = Fraction(d2[0] * d1[0] + d2[1] * d1[1]) / norm
    a, b = _param_range(lo2, hi2, t0, scale)
    lo = lo1 if a is None else (a if lo1 is None else max(lo1, a))
    hi = hi1 if b is None else (b if hi1 is None else min(hi1, b))
    if lo is not None and hi is not None:
        if lo > hi:
            return None
        if lo == hi:
            return Point(o1.x + lo * d1[0], o1.y + lo * d1[1])
        return Segment(
            Point(o1.x + lo * d1[0], o1.y + lo * d1[1]),
            Point(o1.x + hi * d1[0], o1.y + hi * d1[1]),
        )
    if lo is None and hi is None:
        return Ray(o1, d1)
    if lo is None:
        return Ray(Point(o1.x + hi * d1[0], o1.y + hi * d1[1]), (-d1[0], -d1[1]))
    return Ray(Point(o1.x + lo * d1[0], o1.y + lo * d1[1]), d1)


def segment_intersect(s1: Segment, s2: Segment) -> Intersection:
    return _intersect_param(s1.p, s1.direction, 0, 1, s2.p, s2.direction, 0, 1)


def ray_intersect(r1: Ray, r2: Ray) -> Intersection:
    return _intersect_param(
        r1.origin, r1.direction, 0, None, r2.origin, r2.direction, 0, None
    )


def line_intersect(r1: Ray, r2: Ray) -> Intersection:
    """Intersection of the full supporting lines of two rays."""
    return _intersect_param(
        r1.origin, r1.direction, None, None, r2.origin, r2.direction, None, None
    )


def line_parameter(origin: Point, direction, p: Point) -> Fraction:
    """Parameter ``t`` with ``origin + t*direction == p`` (p assumed on the line)."""
    dx, dy = direction
    if dx != 0:
        return (p.x - origin.x) / dx
    return (p.y - origin.y) / dy


def point_on_segment(p: Point, s: Segment) -> bool:
    if orientation(s.p, s.q, p) != 0:
        return False
    return (
        min(s.p.x, s.q.x) <= p.x <= max(s.p.x, s.q.x)
        and min(s.p.y, s.q.y) <= p.y <= max(s.p.y, s.q.y)
    )


def segment_contains(outer: Segment, inner: Segment) -> bool:
    return point_on_segment(inner.p, outer) and point_on_segment(inner.q, outer)


def collinear_segments(s1: Segment, s2: Segment) -> bool:
    """True when both segments lie on one common line."""
    return orientation(s1.p, s1.q, s2.p) == 0 and orientation(s1.p, s1.q, s2.q) == 0


def _bits(v: Fraction) -> int:
    return max(abs(v.numerator).bit_length(), v.denominator.bit_length())


def bit_length(p) -> int:
    """Largest bit length among the numerators and denominators of ``p``."""
    return max(_bits(Fraction(c)) for c in p)


# -- text formats ---------------------------------------------------------

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def format_rational(v: Number) -> str:
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_point(p) -> str:
    return f"({format_rational(p[0])}, {format_rational(p[1])})"


def parse_point(text: str) -> Point:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"not a point: {text!r}")
    parts = text[1:-1].split(",")
    if len(parts) != 2:
        raise ValueError(f"not a point: {text!r}")
    return Point(parse_rational(parts[0]), parse_rational(parts[1]))
