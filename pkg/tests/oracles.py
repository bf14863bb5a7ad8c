"""Float reference implementations, independent of the exact kernel."""

import math
import random
from fractions import Fraction

from circleray.cover_solver import Polyline
from circleray.exact_geom import Point


def _point_segment(px, py, ax, ay, bx, by):
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    t = 0.0 if L2 == 0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / L2))
    return math.hypot(px - ax - t * dx, py - ay - t * dy)


def _floats(edges):
    return [(float(e.p.x), float(e.p.y), float(e.q.x), float(e.q.y)) for e in edges]


def sampled_hausdorff(p_edges, q_edges, step):
    """Directed Hausdorff estimate from samples spaced at most ``step`` apart.

    The true value lies in ``[estimate, estimate + step / 2]``.
    """
    q = _floats(q_edges)
    best = 0.0
    for ax, ay, bx, by in _floats(p_edges):
        k = max(1, math.ceil(math.hypot(bx - ax, by - ay) / step))
        for i in range(k + 1):
            t = i / k
            px, py = ax + t * (bx - ax), ay + t * (by - ay)
            best = max(best, min(_point_segment(px, py, *f) for f in q))
    return best


def random_polyline(rng: random.Random, max_vertices=5, span=20, den=4):
    while True:
        k = rng.randint(2, max_vertices)
        verts = [
            Point(Fraction(rng.randint(-span, span), rng.randint(1, den)),
                  Fraction(rng.randint(-span, span), rng.randint(1, den)))
            for _ in range(k)
        ]
        try:
            return Polyline(tuple(verts))
        except ValueError:
            continue


def random_pair(rng: random.Random):
    p, q = random_polyline(rng), random_polyline(rng)
    delta = Fraction(rng.randint(0, 60), 4)
    return p, q, delta
