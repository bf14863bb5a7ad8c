"""Deterministic SVG figures of embeddings, cover instances and witnesses.

Geometry stays exact until the last moment: every coordinate is converted to
float only when it is written.  The y axis uses a symmetric log scale so the
factorial curve and its rays fit on one page; because that bends straight
lines, segments are drawn as sampled polylines.  Each element carries a
``<title>`` with its exact rational coordinates.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterable, Optional
from xml.sax.saxutils import escape, quoteattr

from .cover_solver import CoverWitness, Polyline
from .curve_simplify import SimplificationInstance
from .exact_geom import Point, Ray, Segment, format_point, ray_intersect
from .needle_reduce import LEADING, CoverInstance
from .ray_embed import RayEmbedding, curve_point

WIDTH, HEIGHT, MARGIN = 800, 600, 40
SAMPLES = 32

_STYLE = """
.curve { fill: none; stroke: #888; stroke-width: 1; }
.curve-point { fill: #444; }
.ray { fill: none; stroke: #1f77b4; stroke-width: 1.2; }
.complement { fill: none; stroke: #1f77b4; stroke-width: 0.8; stroke-dasharray: 4 3; }
.intersection { fill: #d62728; }
.needle { fill: none; stroke: #2ca02c; stroke-width: 1; }
.leading { fill: none; stroke: #9467bd; stroke-width: 1.4; }
.input { fill: none; stroke: #7f7f7f; stroke-width: 1; }
.witness { fill: none; stroke: #ff7f0e; stroke-width: 1.6; stroke-opacity: 0.8; }
.link-label { font: 10px sans-serif; fill: #ff7f0e; }
""".strip()


def _num(v: float) -> str:
    return f"{v:.12g}"


def symlog(y: float) -> float:
    return math.copysign(math.log10(1 + abs(y)), y)


class _Frame:
    """Maps float data coordinates (after symlog on y) onto the page."""

    def __init__(self, points: Iterable[Point]):
        xs, ys = [], []
        for p in points:
            xs.append(float(p.x))
            ys.append(symlog(float(p.y)))
        if not xs:
            xs, ys = [0.0, 1.0], [0.0, 1.0]
        self.x0, self.x1 = min(xs), max(xs)
        self.y0, self.y1 = min(ys), max(ys)
        if self.x1 == self.x0:
            self.x0, self.x1 = self.x0 - 1, self.x1 + 1
        if self.y1 == self.y0:
            self.y0, self.y1 = self.y0 - 1, self.y1 + 1

    def map(self, x: float, y: float) -> tuple[float, float]:
        u = MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * MARGIN)
        v = HEIGHT - MARGIN - (symlog(y) - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2 * MARGIN)
        return u, v

    def box(self) -> tuple[float, float, float, float]:
        """Data-space bounds (x0, x1, y0, y1) with y un-logged."""

        def unlog(t):
            return math.copysign(10 ** abs(t) - 1, t)

        return self.x0, self.x1, unlog(self.y0), unlog(self.y1)


def _sampled(frame: _Frame, a: tuple[float, float], b: tuple[float, float]) -> list:
    pts = []
    for i in range(SAMPLES + 1):
        t = i / SAMPLES
        pts.append(frame.map(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    return pts


def _points_attr(pts) -> str:
    return " ".join(f"{_num(u)},{_num(v)}" for u, v in pts)


def _polyline(pts, cls: str, title: str) -> str:
    return (
        f'<polyline class="{cls}" points="{_points_attr(pts)}">'
        f"<title>{escape(title)}</title></polyline>"
    )


def _segment(frame: _Frame, s: Segment, cls: str, label: str) -> str:
    a = (float(s.p.x), float(s.p.y))
    b = (float(s.q.x), float(s.q.y))
    title = f"{label}: {format_point(s.p)} -> {format_point(s.q)}"
    return _polyline(_sampled(frame, a, b), cls, title)


def _clip(origin, direction, box, t_lo: float, t_hi: float):
    """Liang-Barsky clip of origin + t*direction, t in [t_lo, t_hi], to ``box``."""
    x0, x1, y0, y1 = box
    (ox, oy), (dx, dy) = origin, direction
    for p, q in ((-dx, ox - x0), (dx, x1 - ox), (-dy, oy - y0), (dy, y1 - oy)):
        if p == 0:
            if q < 0:
                return None
            continue
        t = q / p
        if p < 0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
    if t_lo >= t_hi:
        return None
    return t_lo, t_hi


def _ray_parts(frame: _Frame, label, r: Ray) -> list[str]:
    o = (float(r.origin.x), float(r.origin.y))
    d = (float(r.direction[0]), float(r.direction[1]))
    box = frame.box()
    out = []
    for cls, lo, hi in (("ray", 0.0, math.inf), ("complement", -math.inf, 0.0)):
        span = _clip(o, d, box, lo, hi)
        if span is None:
            continue
        a = (o[0] + span[0] * d[0], o[1] + span[0] * d[1])
        b = (o[0] + span[1] * d[0], o[1] + span[1] * d[1])
        title = f"ray {label}: origin={format_point(r.origin)} dir={format_point(r.direction)}"
        out.append(_polyline(_sampled(frame, a, b), cls, title))
    return out


def _marker(frame: _Frame, p: Point, cls: str, title: str, radius: float = 3) -> str:
    u, v = frame.map(float(p.x), float(p.y))
    return (
        f'<circle class="{cls}" cx="{_num(u)}" cy="{_num(v)}" r="{_num(radius)}">'
        f"<title>{escape(title)}</title></circle>"
    )


def _curve(frame: _Frame, top: int) -> list[str]:
    if top < 1:
        return []
    pts = []
    steps = SAMPLES * top
    for i in range(steps + 1):
        x = 1 + (top - 1) * i / steps
        pts.append(frame.map(x, math.gamma(x + 1)))
    out = [_polyline(pts, "curve", "y = x!")]
    for k in range(1, top + 1):
        c = curve_point(k)
        out.append(_marker(frame, c, "curve-point", f"{k}: {format_point(c)}", 2))
    return out


def _witness(frame: _Frame, w: CoverWitness) -> list[str]:
    p = w.polyline
    pts = []
    for link in p.links:
        a = (float(link.p.x), float(link.p.y))
        b = (float(link.q.x), float(link.q.y))
        pts.extend(_sampled(frame, a, b)[: -1])
    last = p.vertices[-1]
    pts.append(frame.map(float(last.x), float(last.y)))
    title = "witness: " + " ".join(format_point(v) for v in p.vertices)
    out = [_polyline(pts, "witness", title)]
    label_of = {link: label for label, link in w.assignment.items()}
    for i, link in enumerate(p.links):
        mid_u, mid_v = frame.map(
            (float(link.p.x) + float(link.q.x)) / 2, (float(link.p.y) + float(link.q.y)) / 2
        )
        text = f"{i}:{label_of.get(i, '')}"
        out.append(
            f'<text class="link-label" x="{_num(mid_u)}" y="{_num(mid_v)}">{escape(text)}</text>'
        )
    return out


def _document(layers: list[tuple[str, list[str]]]) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<style>{escape(_STYLE)}</style>",
    ]
    for name, elements in layers:
        if not elements:
            continue
        lines.append(f"<g id={quoteattr(name)}>")
        lines.extend(elements)
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_embedding(e: RayEmbedding) -> str:
    """Curve, rays, dashed complements and ray-ray intersection markers."""
    if e.n == 0:
        return _document([])
    top = max(b for _, b in e.positions.values())
    frame = _Frame([curve_point(k) for k in range(1, top + 1)] + [Point(0, 0)])
    rays, marks = [], []
    for label in e.labels:
        rays.extend(_ray_parts(frame, label, e.rays[label]))
    for u, v in combinations(e.labels, 2):
        c = ray_intersect(e.rays[u], e.rays[v])
        if isinstance(c, Point):
            marks.append(_marker(frame, c, "intersection", f"{u} x {v}: {format_point(c)}"))
    return _document(
        [("curve", _curve(frame, top)), ("rays", rays), ("intersections", marks)]
    )


def render_cover(ci: CoverInstance, witness: Optional[CoverWitness] = None) -> str:
    """Needles, leading segments and optionally a witness overlay."""
    pts = [p for s in ci.segments for p in (s.p, s.q)]
    if witness is not None:
        pts.extend(witness.polyline.vertices)
    frame = _Frame(pts)
    needles, leading = [], []
    for label, s in zip(ci.labels, ci.segments):
        if label in LEADING:
            leading.append(_segment(frame, s, "leading", label))
        else:
            needles.append(_segment(frame, s, "needle", label))
    layers = [("needles", needles), ("leading", leading)]
    if witness is not None:
        layers.append(("witness", _witness(frame, witness)))
    return _document(layers)


def render_polyline(p: Polyline, cls: str = "input") -> str:
    frame = _Frame(p.vertices)
    segs = [_segment(frame, s, cls, f"link {i}") for i, s in enumerate(p.links)]
    return _document([(cls, segs)])


def render(obj, witness: Optional[CoverWitness] = None) -> str:
    """Dispatch on the stage output type."""
    if isinstance(obj, RayEmbedding):
        return render_embedding(obj)
    if isinstance(obj, CoverInstance):
        return render_cover(obj, witness)
    if isinstance(obj, SimplificationInstance):
        return render_polyline(obj.input)
    if isinstance(obj, Polyline):
        return render_polyline(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")
