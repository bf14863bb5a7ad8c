"""Directed Hausdorff predicates and the cover -> curve simplification reduction.

``directed_hausdorff_leq`` is exact: for each edge of ``P`` the parameters
within distance delta of an edge of ``Q`` form an interval whose endpoints are
roots of rational quadratics.  Those endpoints are kept as ``r + s*sqrt(m)``
and compared by sign arithmetic on rationals only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from math import factorial
from typing import NamedTuple, Optional, Sequence, Union

from .cover_solver import Polyline, solve_cover
from .exact_geom import (
    Point,
    Ray,
    Segment,
    format_point,
    format_rational,
    parse_point,
    parse_rational,
    ray_intersect,
    segment_intersect,
    line_parameter,
    sign,
)
from .needle_reduce import CoverInstance, connectivity_check

# -- exact quadratic surds -------------------------------------------------


class Surd(NamedTuple):
    """The real number ``r + s * sqrt(m)`` with ``m >= 0``."""

    r: Fraction
    s: Fraction = Fraction(0)
    m: Fraction = Fraction(0)


def _sign2(a, b, m) -> int:
    """sign(a + b*sqrt(m))"""
    sb = sign(b) if m else 0
    sa = sign(a)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    return sa * sign(a * a - b * b * m)


def _sign3(a, b, m, c, n) -> int:
    """sign(a + b*sqrt(m) + c*sqrt(n))"""
    s1 = _sign2(a, b, m)
    sc = sign(c) if n else 0
    if sc == 0:
        return s1
    if s1 == 0 or s1 == sc:
        return sc
    # |a + b sqrt(m)| vs |c sqrt(n)|, squared
    return s1 * _sign2(a * a + b * b * m - c * c * n, 2 * a * b, m)


def compare(x: Surd, y: Surd) -> int:
    return _sign3(x.r - y.r, x.s, x.m, -y.s, y.m)


_surd_key = cmp_to_key(compare)


def _smax(x: Surd, y: Surd) -> Surd:
    return x if compare(x, y) >= 0 else y


def _smin(x: Surd, y: Surd) -> Surd:
    return x if compare(x, y) <= 0 else y


def surd_float(x: Surd) -> float:
    return float(x.r) + float(x.s) * float(x.m) ** 0.5


# -- distance intervals ----------------------------------------------------


def _dot(ax, ay, bx, by):
    return ax * bx + ay * by


def _disk_interval(p0: Point, d, c: Point, delta2: Fraction):
    """Parameters t with |p0 + t d - c|^2 <= delta^2."""
    wx, wy = p0.x - c.x, p0.y - c.y
    a = _dot(d[0], d[1], d[0], d[1])
    b = _dot(wx, wy, d[0], d[1])
    cc = _dot(wx, wy, wx, wy) - delta2
    disc = b * b - a * cc
    if disc < 0:
        return None
    return Surd(-b / a, -1 / a, disc), Surd(-b / a, 1 / a, disc)


def _strip_interval(p0: Point, d, f0: Point, f1: Point, delta2: Fraction):
    """Parameters t whose foot point falls inside f and whose distance to f's
    line is at most delta."""
    gx, gy = f1.x - f0.x, f1.y - f0.y
    g2 = _dot(gx, gy, gx, gy)
    wx, wy = p0.x - f0.x, p0.y - f0.y
    alpha = _dot(wx, wy, gx, gy) / g2
    beta = _dot(d[0], d[1], gx, gy) / g2
    c0 = gx * wy - gy * wx
    c1 = gx * d[1] - gy * d[0]
    if c1 == 0:
        # parallel: beta != 0 since d is non-zero
        if c0 * c0 > delta2 * g2:
            return None
        lo, hi = sorted(((0 - alpha) / beta, (1 - alpha) / beta))
        return Surd(lo), Surd(hi)
    lo = Surd(-c0 / c1, -1 / abs(c1), delta2 * g2)
    hi = Surd(-c0 / c1, 1 / abs(c1), delta2 * g2)
    if beta != 0:
        a, b = sorted(((0 - alpha) / beta, (1 - alpha) / beta))
        lo, hi = _smax(lo, Surd(a)), _smin(hi, Surd(b))
    elif not 0 <= alpha <= 1:
        return None
    if compare(lo, hi) > 0:
        return None
    return lo, hi


def near_interval(e: Segment, f: Segment, delta: Fraction):
    """Closed parameter interval of ``e`` (t in R) within ``delta`` of ``f``.

    The distance to a segment is convex, so the union of the two endpoint
    disks and the side strip is a single interval.
    """
    delta2 = Fraction(delta) ** 2
    d = e.direction
    pieces = [
        _disk_interval(e.p, d, f.p, delta2),
        _disk_interval(e.p, d, f.q, delta2),
        _strip_interval(e.p, d, f.p, f.q, delta2),
    ]
    pieces = [pc for pc in pieces if pc is not None]
    if not pieces:
        return None
    lo = min((pc[0] for pc in pieces), key=_surd_key)
    hi = max((pc[1] for pc in pieces), key=_surd_key)
    return lo, hi


def _edges_of(q) -> list[Segment]:
    if isinstance(q, Polyline):
        return q.links
    if isinstance(q, Segment):
        return [q]
    return list(q)


def edge_covered(e: Segment, edges: Sequence[Segment], delta: Fraction) -> bool:
    zero, one = Surd(Fraction(0)), Surd(Fraction(1))
    intervals = []
    for f in edges:
        iv = near_interval(e, f, delta)
        if iv is None:
            continue
        lo, hi = _smax(iv[0], zero), _smin(iv[1], one)
        if compare(lo, hi) <= 0:
            intervals.append((lo, hi))
    intervals.sort(key=lambda iv: _surd_key(iv[0]))
    reach = zero
    for lo, hi in intervals:
        if compare(lo, reach) > 0:
            return False
        reach = _smax(reach, hi)
    return bool(intervals) and compare(reach, one) >= 0


def directed_hausdorff_leq(
    p: Union[Polyline, Segment, Sequence[Segment]],
    q: Union[Polyline, Segment, Sequence[Segment]],
    delta,
) -> bool:
    """Is every point of ``p`` within ``delta`` of ``q``?

    Either argument may be a polyline, a segment, or a collection of segments.
    """
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    q_edges = _edges_of(q)
    return all(edge_covered(e, q_edges, delta) for e in _edges_of(p))


# -- the reduction ----------------------------------------------------------


@dataclass(frozen=True)
class SimplificationInstance:
    input: Polyline
    k: int
    delta: Fraction

    def to_text(self) -> str:
        head = f"k={self.k} delta={format_rational(self.delta)}"
        return head + "\n" + self.input.to_text()

    @classmethod
    def parse(cls, text: str) -> "SimplificationInstance":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        fields = dict(tok.split("=", 1) for tok in lines[0].split())
        verts = tuple(parse_point(ln) for ln in lines[1:] if not ln.startswith("#"))
        return cls(Polyline(verts), int(fields["k"]), parse_rational(fields["delta"]))


def safe_delta(ci: CoverInstance) -> Fraction:
    """Exclusive upper bound 3/(4 n!) on delta for an n-needle instance."""
    if ci.meta is None:
        raise ValueError("instance carries no needle metadata")
    return Fraction(3, 4 * factorial(ci.n_needles))


def usable_delta(ci: CoverInstance) -> Fraction:
    """Half of :func:`safe_delta`, a ready-to-use non-zero tolerance."""
    return safe_delta(ci) / 2


def arrangement(segments: Sequence[Segment]):
    """Vertices (endpoints and crossings) and the sub-segment edges between them."""
    on_segment: list[set[Point]] = [{s.p, s.q} for s in segments]
    for i, j in combinations(range(len(segments)), 2):
        c = segment_intersect(segments[i], segments[j])
        if isinstance(c, Point):
            on_segment[i].add(c)
            on_segment[j].add(c)
        elif isinstance(c, Segment):
            for pt in (c.p, c.q):
                on_segment[i].add(pt)
                on_segment[j].add(pt)
    vertices: set[Point] = set()
    edges: set[frozenset] = set()
    for s, pts in zip(segments, on_segment):
        ordered = sorted(pts, key=lambda pt: line_parameter(s.p, s.direction, pt))
        vertices.update(ordered)
        for a, b in zip(ordered, ordered[1:]):
            edges.add(frozenset((a, b)))
    return sorted(vertices), edges


def covering_walk(segments: Sequence[Segment]) -> list[Point]:
    """Depth-first walk over the arrangement using every edge at most twice.

    Each edge is walked out and back; the trailing run of return steps is
    dropped, so the walk has at most ``2 * |edges|`` vertices.
    """
    vertices, edges = arrangement(segments)
    adj: dict[Point, list[Point]] = {v: [] for v in vertices}
    for e in edges:
        a, b = tuple(e)
        adj[a].append(b)
        adj[b].append(a)
    for v in adj:
        adj[v].sort()
    start = vertices[0]
    used: set[frozenset] = set()
    walk = [start]
    returning = [False]
    stack = [(start, iter(adj[start]))]
    while stack:
        u, it = stack[-1]
        for w in it:
            e = frozenset((u, w))
            if e in used:
                continue
            used.add(e)
            walk.append(w)
            returning.append(False)
            stack.append((w, iter(adj[w])))
            break
        else:
            stack.pop()
            if stack:
                walk.append(stack[-1][0])
                returning.append(True)
    while len(walk) > 2 and returning[-1]:
        walk.pop()
        returning.pop()
    return walk


def build_dcs_instance(ci: CoverInstance, delta=0) -> SimplificationInstance:
    """Input polyline tracing exactly the union of ``ci``'s segments."""
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta > 0 and not delta < safe_delta(ci):
        raise ValueError(f"delta must be below {format_rational(safe_delta(ci))}")
    if not connectivity_check(ci):
        raise ValueError("instance is not connected")
    return SimplificationInstance(Polyline(tuple(covering_walk(ci.segments))), ci.k, delta)


def same_image(p, segments: Sequence[Segment]) -> bool:
    """Mutual containment at distance zero."""
    return directed_hausdorff_leq(p, segments, 0) and directed_hausdorff_leq(
        segments, p, 0
    )


def solve_dcs_zero(si: SimplificationInstance, ci: CoverInstance) -> Optional[Polyline]:
    """Decide the delta = 0 simplification through the cover solver."""
    if si.delta != 0:
        raise ValueError("only delta = 0 is decided exactly")
    if si.k != ci.k or not same_image(si.input, ci.segments):
        raise ValueError("simplification instance was not built from this cover instance")
    w = solve_cover(ci)
    return None if w is None else w.polyline


# -- cones ------------------------------------------------------------------


class HalfPlane(NamedTuple):
    """``a*x + b*y + c >= 0``"""

    a: Fraction
    b: Fraction
    c: Fraction

    def holds(self, pt: Point) -> bool:
        return self.a * pt.x + self.b * pt.y + self.c >= 0


def _through(u: Point, v: Point, keep: Point) -> HalfPlane:
    a, b = -(v.y - u.y), v.x - u.x
    c = -(a * u.x + b * u.y)
    if a * keep.x + b * keep.y + c < 0:
        a, b, c = -a, -b, -c
    return HalfPlane(a, b, c)


def _nonempty(planes: Sequence[HalfPlane]) -> bool:
    """Feasibility of a pointed intersection of closed half-planes."""
    for h1, h2 in combinations(planes, 2):
        det = h1.a * h2.b - h1.b * h2.a
        if det == 0:
            continue
        x = (h1.b * h2.c - h2.b * h1.c) / det
        y = (h2.a * h1.c - h1.a * h2.c) / det
        pt = Point(x, y)
        if all(h.holds(pt) for h in planes):
            return True
    return False


@dataclass(frozen=True)
class Cone:
    """Enlarged cone of a segment: bounds join endpoints shifted by 2*delta.

    ``left_bound`` runs from the left-shifted start to the right-shifted end,
    ``right_bound`` the other way; they cross at the segment midpoint.  The
    tip is the part between the perpendiculars through the endpoints, the
    tails are the two remaining wedges.
    """

    segment: Segment
    delta: Fraction

    @property
    def offset(self) -> tuple[Fraction, Fraction]:
        s = self.segment
        w = 2 * self.delta
        # shift sideways; horizontal segments shift vertically
        return (Fraction(0), w) if s.p.y == s.q.y else (w, Fraction(0))

    @property
    def left_bound(self) -> Segment:
        s, (ox, oy) = self.segment, self.offset
        return Segment(Point(s.p.x - ox, s.p.y - oy), Point(s.q.x + ox, s.q.y + oy))

    @property
    def right_bound(self) -> Segment:
        s, (ox, oy) = self.segment, self.offset
        return Segment(Point(s.p.x + ox, s.p.y + oy), Point(s.q.x - ox, s.q.y - oy))

    def tail(self, end: str) -> list[HalfPlane]:
        """Half-planes of the tail beyond ``'q'`` (forward) or ``'p'``."""
        s = self.segment
        dx, dy = s.direction
        anchor = s.q if end == "q" else s.p
        sgn = 1 if end == "q" else -1
        beyond = HalfPlane(
            sgn * dx, sgn * dy, -sgn * (dx * anchor.x + dy * anchor.y)
        )
        lb, rb = self.left_bound, self.right_bound
        return [beyond, _through(lb.p, lb.q, anchor), _through(rb.p, rb.q, anchor)]


def tails_meet(s1: Segment, end1: str, s2: Segment, end2: str, delta: Fraction) -> bool:
    """Do the given tails of the two enlarged cones intersect?"""
    if delta == 0:

        def tail_ray(s, end):
            dx, dy = s.direction
            return Ray(s.q, (dx, dy)) if end == "q" else Ray(s.p, (-dx, -dy))

        return ray_intersect(tail_ray(s1, end1), tail_ray(s2, end2)) is not None
    c1, c2 = Cone(s1, delta), Cone(s2, delta)
    return _nonempty(c1.tail(end1) + c2.tail(end2))


def pair_case(pos1: tuple[int, int], pos2: tuple[int, int]) -> str:
    (a, b), (c, d) = sorted((pos1, pos2))
    if c < b < d:
        return "crossing"
    if b < c:
        return "disjoint"
    return "nested"


def dist_h_disjoint(a: int, b: int, c: int) -> Fraction:
    """Horizontal gap at height c! between the (a, b) line and point (c, c!)."""
    fa, fb, fc = factorial(a), factorial(b), factorial(c)
    return a + Fraction(fc - fa, fb - fa) * (b - a) - c


def dist_h_nested(a: int, c: int, d: int) -> Fraction:
    """Horizontal gap at height a! between the (c, d) line and point (a, a!)."""
    fa, fc, fd = factorial(a), factorial(c), factorial(d)
    return c - Fraction(fc - fa, fd - fc) * (d - c) - a


@dataclass
class PairReport:
    chords: tuple[int, int]
    case: str
    dist_h: Optional[Fraction]
    shift: Optional[Fraction]
    new_tail_meetings: list

    @property
    def margin(self) -> Optional[Fraction]:
        if self.dist_h is None:
            return None
        return self.dist_h - self.shift


@dataclass
class ConeReport:
    delta: Fraction
    pairs: list
    violations: list  # (label1, end1, label2, end2), needle halves only
    leading_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """No new tail-tail meeting between needle halves of different chords."""
        return not self.violations

    @property
    def binding_margin(self) -> Optional[Fraction]:
        margins = [p.margin for p in self.pairs if p.margin is not None]
        return min(margins) if margins else None


_ENDS = ("p", "q")


def _new_meetings(s1, s2, delta) -> list[tuple[str, str]]:
    out = []
    for e1 in _ENDS:
        for e2 in _ENDS:
            if tails_meet(s1, e1, s2, e2, delta) and not tails_meet(s1, e1, s2, e2, 0):
                out.append((e1, e2))
    return out


def check_cone_structure(ci: CoverInstance, delta) -> ConeReport:
    """Compare tail-tail meetings of enlarged cones at ``delta`` against delta = 0.

    Needle halves of different chords are checked pairwise and classified by
    the relative position of their chords on the curve; these decide ``ok``.
    Leading segments are checked against every needle half as well and land in
    ``leading_violations``, which is informational.  Two halves of one needle
    already share their apex and are skipped.
    """
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    m = ci.meta
    if m is None:
        raise ValueError("instance carries no needle metadata")
    pairs, violations, leading = [], [], []
    for na, nb in combinations(m.needles, 2):
        pa = (int(na.ray.origin.x), int(na.ray.origin.x + na.ray.direction[0]))
        pb = (int(nb.ray.origin.x), int(nb.ray.origin.x + nb.ray.direction[0]))
        (a, b), (c, d) = sorted((pa, pb))
        case = pair_case(pa, pb)
        y_low = m.y_low
        if case == "disjoint":
            dist = dist_h_disjoint(a, b, c)
            shift = 2 * delta + 4 * delta * (factorial(c) - factorial(a)) / (factorial(a) - y_low)
        elif case == "nested":
            dist = dist_h_nested(a, c, d)
            shift = 4 * delta
        else:
            dist = shift = None
        met = []
        for la, sa in zip(na.labels, (na.left, na.right)):
            for lb, sb in zip(nb.labels, (nb.left, nb.right)):
                for e1, e2 in _new_meetings(sa, sb, delta):
                    met.append((la, e1, lb, e2))
        violations += met
        pairs.append(PairReport((na.chord, nb.chord), case, dist, shift, met))
    for label in ("s_h", "s_v", "s_t"):
        lead = ci.segment(label)
        for nd in m.needles:
            for ln, sn in zip(nd.labels, (nd.left, nd.right)):
                for e1, e2 in _new_meetings(lead, sn, delta):
                    leading.append((label, e1, ln, e2))
    return ConeReport(delta, pairs, violations, leading)


@dataclass
class EquivalenceReport:
    delta: Fraction
    cones: ConeReport
    verdict_zero: bool
    witness: Optional[Polyline]

    @property
    def structure_preserved(self) -> bool:
        return self.cones.ok

    @property
    def verdict_delta(self) -> Optional[bool]:
        """Carried-over verdict at ``delta``; ``None`` when the structure changed."""
        return self.verdict_zero if self.structure_preserved else None


def equivalence_nonzero_delta(ci: CoverInstance, max_n: int = 4) -> EquivalenceReport:
    if ci.n_needles > max_n:
        raise ValueError(f"at most {max_n} needles supported")
    delta = usable_delta(ci)
    cones = check_cone_structure(ci, delta)
    si = build_dcs_instance(ci, 0)
    witness = solve_dcs_zero(si, ci)
    return EquivalenceReport(delta, cones, witness is not None, witness)
