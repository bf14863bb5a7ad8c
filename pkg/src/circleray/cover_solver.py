"""Exact exhaustive solver and verifier for Connected Segment Polyline Cover.

In general position a link can cover at most one segment, so with budget
``k == len(segments)`` every link lies on the supporting line of exactly one
segment and consecutive links meet at the crossing of those two lines.  A
candidate cover is therefore just an ordering of the segments, which the
search below enumerates with memoised dead ends.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact_geom import (
    Point,
    Segment,
    format_point,
    line_intersect,
    line_parameter,
    parse_point,
    segment_contains,
)
from .needle_reduce import LEADING, CoverInstance, general_position

MAX_SEGMENTS = 13


class GuardError(ValueError):
    """The instance is outside what the exhaustive solver may answer."""


@dataclass(frozen=True)
class Polyline:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise ValueError("a polyline needs at least two vertices")
        for a, b in zip(verts, verts[1:]):
            if a == b:
                raise ValueError(f"repeated consecutive vertex {a}")

    @property
    def links(self) -> list[Segment]:
        return [Segment(a, b) for a, b in zip(self.vertices, self.vertices[1:])]

    def __len__(self):
        return len(self.vertices) - 1

    def to_text(self) -> str:
        return "\n".join(format_point(v) for v in self.vertices) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Polyline":
        pts = [
            parse_point(line)
            for line in (raw.split("#", 1)[0].strip() for raw in text.splitlines())
            if line
        ]
        return cls(tuple(pts))


@dataclass(frozen=True)
class CoverWitness:
    polyline: Polyline
    assignment: dict  # segment label -> 0-based link index
    order: tuple[int, ...] = ()

    def to_text(self) -> str:
        lines = [f"vertex {format_point(v)}" for v in self.polyline.vertices]
        for label, link in sorted(self.assignment.items(), key=lambda kv: kv[1]):
            lines.append(f"link {link} {label}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, labels: Optional[Sequence[str]] = None) -> "CoverWitness":
        verts, assignment = [], {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            kind, rest = line.split(None, 1)
            if kind == "vertex":
                verts.append(parse_point(rest))
            elif kind == "link":
                idx, label = rest.split()
                assignment[label] = int(idx)
            else:
                raise ValueError(f"unknown witness line: {line!r}")
        order: tuple[int, ...] = ()
        if labels is not None:
            by_link = sorted(assignment.items(), key=lambda kv: kv[1])
            order = tuple(list(labels).index(label) for label, _ in by_link)
        return cls(Polyline(tuple(verts)), assignment, order)


def verify_cover(ci: CoverInstance, p: Polyline) -> bool:
    """Every segment lies inside some link and ``p`` uses at most ``k`` links."""
    links = p.links
    if len(links) > ci.k:
        return False
    return all(any(segment_contains(link, s) for link in links) for s in ci.segments)


class _Bends:
    """Crossings of supporting lines, as parameters along each segment."""

    def __init__(self, segments: Sequence[Segment]):
        m = len(segments)
        self.segments = segments
        self.point: list[list[Optional[Point]]] = [[None] * m for _ in range(m)]
        self.param: list[list[Optional[Fraction]]] = [[None] * m for _ in range(m)]
        lines = [s.supporting_line() for s in segments]
        for i in range(m):
            for j in range(i + 1, m):
                c = line_intersect(lines[i], lines[j])
                if not isinstance(c, Point):
                    continue
                ui = line_parameter(segments[i].p, segments[i].direction, c)
                uj = line_parameter(segments[j].p, segments[j].direction, c)
                # a bend inside either segment can never be a link endpoint
                if 0 < ui < 1 or 0 < uj < 1:
                    continue
                self.point[i][j] = self.point[j][i] = c
                self.param[i][j], self.param[j][i] = ui, uj


def _covers(u_in: Optional[Fraction], u_out: Optional[Fraction]) -> bool:
    """Does a link from parameter ``u_in`` to ``u_out`` span [0, 1]?

    ``None`` marks a free polyline end, which can always be stretched.
    """
    if u_in is None or u_out is None:
        return True  # the fixed end is already outside the open segment
    return min(u_in, u_out) <= 0 and max(u_in, u_out) >= 1


class _Search:
    def __init__(self, ci: CoverInstance, pruned: bool):
        self.ci = ci
        self.m = len(ci.segments)
        self.bends = _Bends(ci.segments)
        self.full = (1 << self.m) - 1
        self.dead: set[tuple[int, int, int]] = set()
        self.pruned = pruned
        if pruned:
            self.lead = [ci.index(label) for label in LEADING]
            self.partner = {}
            for nd in ci.meta.needles:
                a, b = (ci.index(label) for label in nd.labels)
                self.partner[a], self.partner[b] = b, a

    def _candidates(self, mask: int, cur: int, depth: int) -> list[int]:
        if not self.pruned:
            return [j for j in range(self.m) if not mask >> j & 1]
        if depth < 3:
            j = self.lead[depth]
            return [] if mask >> j & 1 else [j]
        needles_used = depth - 3
        if needles_used % 2 == 1:
            j = self.partner.get(cur)
            return [] if j is None or mask >> j & 1 else [j]
        return [j for j in sorted(self.partner) if not mask >> j & 1]

    def extend(self, path: list[int], mask: int, prev: int) -> Optional[list[int]]:
        cur = path[-1]
        if mask == self.full:
            return path
        key = (mask, prev, cur)
        if key in self.dead:
            return None
        u_in = None if prev < 0 else self.bends.param[cur][prev]
        for j in self._candidates(mask, cur, len(path)):
            u_out = self.bends.param[cur][j]
            if u_out is None or not _covers(u_in, u_out):
                continue
            found = self.extend(path + [j], mask | 1 << j, cur)
            if found is not None:
                return found
        self.dead.add(key)
        return None

    def from_start(self, first: int) -> Optional[list[int]]:
        return self.extend([first], 1 << first, -1)

    def starts(self) -> list[int]:
        return self._candidates(0, -1, 0)


def _witness(ci: CoverInstance, order: Sequence[int], bends: _Bends) -> CoverWitness:
    segs = ci.segments
    if len(order) == 1:
        s = segs[order[0]]
        return CoverWitness(Polyline((s.p, s.q)), {ci.labels[order[0]]: 0}, tuple(order))
    inner = [bends.point[a][b] for a, b in zip(order, order[1:])]

    def far_end(s: Segment, u: Fraction) -> Point:
        return s.p if u >= 1 else s.q

    first, last = order[0], order[-1]
    start = far_end(segs[first], bends.param[first][order[1]])
    end = far_end(segs[last], bends.param[last][order[-2]])
    verts = (start, *inner, end)
    assignment = {ci.labels[idx]: link for link, idx in enumerate(order)}
    return CoverWitness(Polyline(verts), assignment, tuple(order))


def solve_cover(
    ci: CoverInstance,
    pruned: Optional[bool] = None,
    max_segments: int = MAX_SEGMENTS,
    threads: int = 1,
) -> Optional[CoverWitness]:
    """Find a cover with at most ``ci.k`` links, or prove none exists.

    ``pruned`` (default: on for needle instances) restricts the search to
    orders that start with the leading segments and visit needle halves in
    consecutive pairs.  Among all witnesses the lexicographically smallest
    segment order is returned.
    """
    m = len(ci.segments)
    if m > max_segments:
        raise GuardError(f"{m} segments exceed the solver limit of {max_segments}")
    if ci.k > m:
        raise GuardError("budgets above the segment count are not supported")
    if not general_position(ci.segments):
        raise GuardError("segments are not in general position")
    if ci.k < m:
        return None
    if pruned is None:
        pruned = ci.meta is not None
    if pruned and ci.meta is None:
        raise GuardError("pruned search needs a needle instance")

    search = _Search(ci, pruned)
    starts = search.starts()
    if threads > 1 and len(starts) > 1:
        # each branch owns its own memo; keep the lexicographic minimum
        def run(first):
            return _Search(ci, pruned).from_start(first)

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = [r for r in pool.map(run, starts) if r is not None]
        order = min(results) if results else None
    else:
        order = None
        for first in starts:
            order = search.from_start(first)
            if order is not None:
                break
    if order is None:
        return None
    return _witness(ci, order, search.bends)


def extract_hamiltonian_path(w: CoverWitness, ci: CoverInstance) -> list[int]:
    """Chord order read from the needle links of a reduction witness."""
    if ci.meta is None:
        raise ValueError("instance carries no needle metadata")
    n = ci.n_needles
    if len(w.polyline) != 2 * n + 3 or len(w.assignment) != len(ci.labels):
        raise ValueError("witness does not have one link per segment")
    by_link = {link: label for label, link in w.assignment.items()}
    last = 2 * n + 2
    if [by_link.get(last - i) for i in range(3)] == list(LEADING):
        by_link = {last - link: label for link, label in by_link.items()}
    if [by_link.get(i) for i in range(3)] != list(LEADING):
        raise ValueError("witness does not start with the leading segments")
    path = []
    for i in range(3, 2 * n + 3, 2):
        a, b = by_link.get(i), by_link.get(i + 1)
        if a is None or b is None or a[:-1] != b[:-1] or {a[-1], b[-1]} != {"L", "R"}:
            raise ValueError(f"links {i} and {i + 1} are not one needle")
        path.append(int(a[:-1]))
    if len(set(path)) != n:
        raise ValueError("a needle is visited twice")
    return path
