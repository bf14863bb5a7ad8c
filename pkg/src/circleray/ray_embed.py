"""Embedding circle graphs as rays grounded on the curve y = x!."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Optional

from .chord_graph import ChordDiagram, Graph
from .exact_geom import (
    Point,
    Ray,
    Segment,
    bit_length,
    format_point,
    parse_point,
    ray_intersect,
    segment_intersect,
)


def curve_point(k: int) -> Point:
    return Point(Fraction(k), Fraction(factorial(k)))


@dataclass(frozen=True)
class RayEmbedding:
    """Ray ``i`` starts at curve point ``a`` and passes through curve point ``b``.

    ``positions[label] == (a, b)`` with ``1 <= a < b <= 2n``.
    """

    rays: dict
    positions: dict

    @property
    def n(self) -> int:
        return len(self.rays)

    @property
    def labels(self) -> list[int]:
        return sorted(self.rays)

    def to_text(self) -> str:
        lines = []
        for label in self.labels:
            r = self.rays[label]
            lines.append(
                f"{label}: origin={format_point(r.origin)} dir={format_point(r.direction)}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "RayEmbedding":
        rays, positions = {}, {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            label_part, rest = line.split(":", 1)
            origin_part, dir_part = rest.split("dir=")
            origin = parse_point(origin_part.strip()[len("origin="):])
            direction = tuple(parse_point(dir_part))
            label = int(label_part)
            rays[label] = Ray(origin, direction)
            positions[label] = _positions_of(rays[label])
        return cls(rays, positions)


def _positions_of(r: Ray) -> tuple[int, int]:
    a = int(r.origin.x)
    dx, dy = r.direction
    b = a + int(dx)
    return (a, b)


def embed(d: ChordDiagram, start: int = 1) -> RayEmbedding:
    """Unroll the circle at endpoint ``start`` (1-based) onto the factorial curve.

    The k-th endpoint met clockwise from ``start`` gets curve index k; each chord
    becomes the ray from its lower curve point through its higher one.
    """
    m = len(d.endpoint_order)
    if m and not 1 <= start <= m:
        raise ValueError(f"start must be in 1..{m}")
    seen: dict[int, list[int]] = {}
    for k in range(m):
        label = d.endpoint_order[(start - 1 + k) % m]
        seen.setdefault(label, []).append(k + 1)
    rays, positions = {}, {}
    for label, (a, b) in sorted(seen.items()):
        pa, pb = curve_point(a), curve_point(b)
        rays[label] = Ray(pa, (pb.x - pa.x, pb.y - pa.y))
        positions[label] = (a, b)
    return RayEmbedding(rays, positions)


def ray_graph(e: RayEmbedding) -> Graph:
    """Intersection graph of the embedded rays, exact."""
    pairs = [
        (u, v)
        for u, v in combinations(e.labels, 2)
        if ray_intersect(e.rays[u], e.rays[v]) is not None
    ]
    return Graph.from_pairs(e.n, pairs)


@dataclass
class Lemma1Report:
    n: int
    checked: int
    counterexample: Optional[tuple[int, int, int, int]] = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def check_lemma1(n: int) -> Lemma1Report:
    """Exhaustively check the sub-ray separation property on curve points 1..n.

    For all distinct ``a < b`` and ``c < d``: the tails ``B`` (from ``b``) and
    ``D`` (from ``d``) are disjoint, and ``A`` meets ``C`` iff the chord parts
    ``[a, b]`` and ``[c, d]`` meet.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    pts = [None] + [curve_point(k) for k in range(1, n + 1)]
    report = Lemma1Report(n, 0)
    for (a, b), (c, d) in permutations(combinations(range(1, n + 1), 2), 2):
        if len({a, b, c, d}) < 4 or a > c:
            continue
        report.checked += 1
        dir_ab = (pts[b].x - pts[a].x, pts[b].y - pts[a].y)
        dir_cd = (pts[d].x - pts[c].x, pts[d].y - pts[c].y)
        tail_b = Ray(pts[b], dir_ab)
        tail_d = Ray(pts[d], dir_cd)
        if ray_intersect(tail_b, tail_d) is not None:
            report.counterexample = (a, b, c, d)
            report.reason = "tails B and D intersect"
            return report
        whole = ray_intersect(Ray(pts[a], dir_ab), Ray(pts[c], dir_cd)) is not None
        heads = segment_intersect(Segment(pts[a], pts[b]), Segment(pts[c], pts[d])) is not None
        if whole != heads:
            report.counterexample = (a, b, c, d)
            report.reason = "A meets C but A\\B misses C\\D" if whole else "head meets, ray misses"
            return report
    return report


def chord_slope(a: int, b: int) -> Fraction:
    return Fraction(factorial(b) - factorial(a), b - a)


@dataclass
class Theorem1Report:
    grounded: bool
    upper_right: bool
    max_bits: int
    bit_bound_ok: bool
    curve_points: int

    @property
    def ok(self) -> bool:
        return self.grounded and self.upper_right and self.bit_bound_ok


BIT_CONSTANT = 4


def bits_within_bound(bits: int, m: int, c: int = BIT_CONSTANT) -> bool:
    """Exact test of ``bits <= c * m * log2(m + 1)``."""
    return 2 ** bits <= (m + 1) ** (c * m)


def check_theorem1_properties(e: RayEmbedding) -> Theorem1Report:
    grounded = True
    upper_right = True
    max_bits = 0
    for r in e.rays.values():
        x = r.origin.x
        if x.denominator != 1 or x < 1 or r.origin.y != factorial(int(x)):
            grounded = False
        dx, dy = r.direction
        if not (dx > 0 and dy > 0):
            upper_right = False
        max_bits = max(max_bits, bit_length(r.origin), bit_length(r.direction))
    m = 2 * e.n
    return Theorem1Report(
        grounded=grounded,
        upper_right=upper_right,
        max_bits=max_bits,
        bit_bound_ok=bits_within_bound(max_bits, max(m, 1)),
        curve_points=m,
    )
