"""Ray embedding -> Connected Segment Polyline Cover instance.

Each ray becomes a *needle*: two segments sharing an apex on the ray's
complement line at height ``y_low`` (well below every crossing), whose upper endpoints sit ``epsilon`` to
either side of the ray origin.  Three leading segments (``s_h``, ``s_v``,
``s_t``) force where a minimum cover starts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Optional

from .exact_geom import (
    Point,
    Ray,
    Segment,
    collinear_segments,
    format_point,
    format_rational,
    line_intersect,
    line_parameter,
    parse_point,
    parse_rational,
    segment_intersect,
)
from .ray_embed import RayEmbedding

LEADING = ("s_h", "s_v", "s_t")
FIRST_EPSILON = Fraction(1, 4)
MAX_HALVINGS = 200


def first_epsilon(n: int) -> Fraction:
    """Starting needle half-width: 1/4, capped at 3/(32 n!).

    The cap keeps needles thin next to the simplification tolerance
    3/(8 n!) used for the DCS reduction, so their cones behave like the rays'.
    """
    return min(FIRST_EPSILON, Fraction(3, 32 * factorial(n)))


def needle_depth(n: int) -> int:
    """How far below the lowest crossing the apexes sit: (2n)!.

    Long needles keep their enlarged cones narrow; the horizontal-distance
    bound behind the DCS tolerance needs (c! - a!) / (a! - y_low) <= n!.
    """
    return factorial(2 * n)


@dataclass(frozen=True)
class Needle:
    chord: int
    left: Segment  # apex -> upper-left endpoint
    right: Segment  # apex -> upper-right endpoint
    apex: Point
    ray: Ray

    @property
    def labels(self) -> tuple[str, str]:
        return (f"{self.chord}L", f"{self.chord}R")


@dataclass(frozen=True)
class NeedleMeta:
    y_low: Fraction
    y_min: Fraction
    y_h: Fraction
    y_top: Fraction
    epsilon: Fraction
    needles: tuple[Needle, ...]


@dataclass(frozen=True)
class CoverInstance:
    """Segments to cover plus a link budget ``k``.

    ``meta`` is present for instances built from a ray embedding.
    """

    segments: tuple[Segment, ...]
    labels: tuple[str, ...]
    k: int
    meta: Optional[NeedleMeta] = field(default=None, compare=True)

    def __post_init__(self):
        if len(self.segments) != len(self.labels):
            raise ValueError("one label per segment required")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("segment labels must be unique")

    @property
    def n_needles(self) -> int:
        return 0 if self.meta is None else len(self.meta.needles)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def segment(self, label: str) -> Segment:
        return self.segments[self.index(label)]

    def to_text(self) -> str:
        lines = [f"k={self.k}"]
        for label, s in zip(self.labels, self.segments):
            lines.append(f"{label} {format_point(s.p)} {format_point(s.q)}")
        if self.meta is not None:
            m = self.meta
            for key in ("y_low", "y_min", "y_h", "y_top", "epsilon"):
                lines.append(f"# {key}={format_rational(getattr(m, key))}")
            for nd in m.needles:
                lines.append(
                    f"# needle {nd.chord} origin={format_point(nd.ray.origin)} "
                    f"dir={format_point(nd.ray.direction)}"
                )
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "CoverInstance":
        k = None
        labels, segments = [], []
        meta_vals: dict[str, Fraction] = {}
        needle_rays: list[tuple[int, Ray]] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                m = _NEEDLE_RE.match(body)
                if m:
                    ray = Ray(parse_point(m.group(2)), tuple(parse_point(m.group(3))))
                    needle_rays.append((int(m.group(1)), ray))
                elif "=" in body:
                    key, value = body.split("=", 1)
                    meta_vals[key.strip()] = parse_rational(value)
                continue
            if line.startswith("k="):
                k = int(line[2:])
                continue
            m = _SEGMENT_RE.match(line)
            if not m:
                raise ValueError(f"cannot parse segment line: {line!r}")
            labels.append(m.group(1))
            segments.append(Segment(parse_point(m.group(2)), parse_point(m.group(3))))
        if k is None:
            raise ValueError("missing k=<int> header")
        meta = None
        if needle_rays:
            seg_of = dict(zip(labels, segments))
            needles = []
            for chord, ray in needle_rays:
                left, right = seg_of[f"{chord}L"], seg_of[f"{chord}R"]
                needles.append(Needle(chord, left, right, left.p, ray))
            meta = NeedleMeta(
                meta_vals["y_low"],
                meta_vals["y_min"],
                meta_vals["y_h"],
                meta_vals["y_top"],
                meta_vals["epsilon"],
                tuple(needles),
            )
        return cls(tuple(segments), tuple(labels), k, meta)


_SEGMENT_RE = re.compile(r"^(\S+)\s+(\([^)]*\))\s+(\([^)]*\))$")
_NEEDLE_RE = re.compile(r"^needle\s+(\d+)\s+origin=(\([^)]*\))\s+dir=(\([^)]*\))$")


def _lowest_crossing(rays: list[Ray]) -> Fraction:
    ys = [r.origin.y for r in rays]
    for r1, r2 in combinations(rays, 2):
        c = line_intersect(r1, r2)
        if isinstance(c, Point):
            ys.append(c.y)
    return min(ys)


def _x_at(s: Segment, y: Fraction) -> Fraction:
    t = (y - s.p.y) / (s.q.y - s.p.y)
    return s.p.x + t * (s.q.x - s.p.x)


def needle_instance(e: RayEmbedding, epsilon: Fraction) -> CoverInstance:
    """Assemble the instance for one fixed ``epsilon`` without validating it."""
    if e.n < 1:
        raise ValueError("embedding needs at least one ray")
    epsilon = Fraction(epsilon)
    rays = [e.rays[label] for label in e.labels]
    # origins are folded into the minimum so every apex sits below every origin
    y_min = _lowest_crossing(rays)
    y_low = y_min - needle_depth(e.n)
    y_h = (y_low + y_min) / 2
    y_top = max(r.origin.y for r in rays)

    needles = []
    for label, r in zip(e.labels, rays):
        o = r.origin
        t = (y_low - o.y) / r.direction[1]
        apex = r.at(t)
        left = Segment(apex, Point(o.x - epsilon, o.y))
        right = Segment(apex, Point(o.x + epsilon, o.y))
        needles.append(Needle(label, left, right, apex, r))

    xs = [_x_at(s, y_h) for nd in needles for s in (nd.left, nd.right)]
    x_left, x_right = min(xs) - 1, max(xs) + 1
    if x_left >= 0:
        raise ValueError("embedding origins must lie right of x = 0")
    top = y_top + 1
    s_h = Segment(Point(x_right, y_h), Point(x_left, y_h))
    s_v = Segment(Point(x_left, y_h), Point(x_left, top))
    s_t = Segment(Point(x_left, top), Point(Fraction(0), top))

    segments = [s_h, s_v, s_t]
    labels = list(LEADING)
    for nd in needles:
        segments += [nd.left, nd.right]
        labels += list(nd.labels)
    meta = NeedleMeta(y_low, y_min, y_h, y_top, epsilon, tuple(needles))
    return CoverInstance(tuple(segments), tuple(labels), 2 * e.n + 3, meta)


def build_cover_instance(e: RayEmbedding) -> CoverInstance:
    """Build the cover instance, halving epsilon from its start until it validates."""
    epsilon = first_epsilon(e.n)
    for _ in range(MAX_HALVINGS):
        ci = needle_instance(e, epsilon)
        if validate_epsilon(ci):
            return ci
        epsilon /= 2
    raise RuntimeError("epsilon halving did not converge; embedding is degenerate")


def _status(s: Segment, c: Point) -> str:
    """Where ``c`` (on the line of needle segment ``s``) sits relative to it."""
    u = line_parameter(s.p, s.direction, c)
    if u < 0:
        return "below"
    if u == 0:
        return "apex"
    if u < 1:
        return "interior"
    if u == 1:
        return "upper"
    return "above"


def general_position(segments) -> bool:
    """No two segments collinear and no point shared by three segments."""
    hits: dict[Point, set[int]] = {}
    for i, j in combinations(range(len(segments)), 2):
        if collinear_segments(segments[i], segments[j]):
            return False
        c = segment_intersect(segments[i], segments[j])
        if isinstance(c, Point):
            owners = hits.setdefault(c, set())
            owners.update((i, j))
            if len(owners) >= 3:
                return False
    return True


def validate_epsilon(ci: CoverInstance) -> bool:
    """Check that the needles reproduce the ray arrangement combinatorially.

    * crossings of needle lines from different needles sit above both upper
      endpoints when the rays meet, and inside the needle when the crossing is
      on that ray's complement; either way strictly above ``s_h``;
    * every needle line crosses ``s_h`` inside both segments, passes ``s_v``'s
      line below ``s_h`` and ``s_t``'s line right of ``s_t``;
    * the segments are in general position.
    """
    m = ci.meta
    if m is None:
        raise ValueError("instance carries no needle metadata")
    s_h, s_v, s_t = (ci.segment(label) for label in LEADING)
    for a, b in combinations(m.needles, 2):
        expected = line_intersect(a.ray, b.ray)
        for sa in (a.left, a.right):
            for sb in (b.left, b.right):
                c = line_intersect(sa.supporting_line(), sb.supporting_line())
                if not isinstance(expected, Point):
                    # parallel rays: the perturbed crossing must stay harmless
                    if isinstance(c, Point) and (
                        c.y <= m.y_h or "interior" not in (_status(sa, c), _status(sb, c))
                    ):
                        return False
                    continue
                if not isinstance(c, Point) or c.y <= m.y_h:
                    return False
                for s, nd in ((sa, a), (sb, b)):
                    on_ray = line_parameter(nd.ray.origin, nd.ray.direction, expected) > 0
                    if _status(s, c) != ("above" if on_ray else "interior"):
                        return False

    for nd in m.needles:
        for s in (nd.left, nd.right):
            line = s.supporting_line()
            c = line_intersect(line, s_h.supporting_line())
            if not isinstance(c, Point) or _status(s, c) != "interior":
                return False
            if not 0 < line_parameter(s_h.p, s_h.direction, c) < 1:
                return False
            c = line_intersect(line, s_v.supporting_line())
            if not isinstance(c, Point) or c.y >= m.y_h:
                return False
            c = line_intersect(line, s_t.supporting_line())
            if not isinstance(c, Point) or c.x <= s_t.q.x or _status(s, c) != "above":
                return False
    return general_position(ci.segments)


def connectivity_check(ci: CoverInstance) -> bool:
    """True iff the union of the instance's segments is connected."""
    n = len(ci.segments)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(n), 2):
        if segment_intersect(ci.segments[i], ci.segments[j]) is not None:
            parent[find(i)] = find(j)
    return len({find(i) for i in range(n)}) <= 1
