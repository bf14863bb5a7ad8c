import math
import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from circleray.chord_graph import ChordDiagram, all_diagrams
from circleray.cover_solver import Polyline, solve_cover
from circleray.curve_simplify import (
    Cone,
    SimplificationInstance,
    Surd,
    arrangement,
    build_dcs_instance,
    check_cone_structure,
    compare,
    covering_walk,
    directed_hausdorff_leq,
    dist_h_disjoint,
    dist_h_nested,
    equivalence_nonzero_delta,
    pair_case,
    safe_delta,
    same_image,
    solve_dcs_zero,
    surd_float,
    tails_meet,
    usable_delta,
)
from circleray.exact_geom import Point, Segment, point_on_segment, segment_contains
from circleray.needle_reduce import CoverInstance, build_cover_instance
from circleray.ray_embed import embed

from oracles import random_pair, sampled_hausdorff


def instance(text):
    return build_cover_instance(embed(ChordDiagram.parse(text)))


def P(*pts):
    return Polyline(tuple(Point(Fraction(x), Fraction(y)) for x, y in pts))


# -- surds -------------------------------------------------------------------

surds = st.builds(
    Surd,
    st.fractions(min_value=-10, max_value=10, max_denominator=7),
    st.fractions(min_value=-3, max_value=3, max_denominator=5),
    st.fractions(min_value=0, max_value=20, max_denominator=3),
)


@given(surds, surds)
def test_surd_compare_matches_float(x, y):
    fx, fy = surd_float(x), surd_float(y)
    c = compare(x, y)
    if abs(fx - fy) > 1e-9:
        assert c == (1 if fx > fy else -1)
    assert compare(y, x) == -c


def test_surd_exact_equality():
    # 1 + sqrt(2) equals 1 + 2*sqrt(1/2)
    assert compare(Surd(Fraction(1), Fraction(1), Fraction(2)),
                   Surd(Fraction(1), Fraction(2), Fraction(1, 2))) == 0


# -- Hausdorff -----------------------------------------------------------------


def test_hausdorff_critical_case():
    p, q = P((0, 0), (1, 0)), P((0, 1), (1, 1))
    assert directed_hausdorff_leq(p, q, 1)
    assert not directed_hausdorff_leq(p, q, Fraction(99, 100))


def test_hausdorff_identity_and_containment():
    q = P((0, 0), (3, 1), (5, -2))
    assert directed_hausdorff_leq(q, q, 0)
    sub = P((Fraction(3, 2), Fraction(1, 2)), (Fraction(9, 4), Fraction(3, 4)))
    assert directed_hausdorff_leq(sub, q, 0)
    assert not directed_hausdorff_leq(q, sub, 0)


def test_hausdorff_irrational_threshold():
    # the far end (2, 1) sits at distance sqrt(2) from Q's end (1, 0)
    p, q = P((0, 0), (2, 1)), P((0, 0), (1, 0))
    assert not directed_hausdorff_leq(p, q, Fraction(141, 100))
    assert directed_hausdorff_leq(p, q, Fraction(142, 100))


def test_hausdorff_gap_between_q_edges():
    # P runs along a Q with a hole; only a large delta bridges it
    p = P((0, 0), (10, 0))
    q = [Segment(Point(0, 0), Point(4, 0)), Segment(Point(6, 0), Point(10, 0))]
    assert not directed_hausdorff_leq(p, q, Fraction(99, 100))
    assert directed_hausdorff_leq(p, q, 1)


def test_hausdorff_negative_delta_rejected():
    with pytest.raises(ValueError):
        directed_hausdorff_leq(P((0, 0), (1, 0)), P((0, 0), (1, 0)), -1)


@given(st.integers(0, 10**6))
def test_hausdorff_matches_sampling_oracle(seed):
    rng = random.Random(seed)
    p, q, delta = random_pair(rng)
    step = 0.01
    est = sampled_hausdorff(p.links, q.links, step)
    if abs(est - float(delta)) > 10 * step:
        assert directed_hausdorff_leq(p, q, delta) == (est <= float(delta))


# -- the reduction -----------------------------------------------------------


def test_single_segment_instance():
    s = Segment(Point(0, 0), Point(3, 1))
    si = build_dcs_instance(CoverInstance((s,), ("a",), 1))
    assert si.input.vertices in ((s.p, s.q), (s.q, s.p))


def test_plus_sign_walk():
    a = Segment(Point(-1, 0), Point(1, 0))
    b = Segment(Point(0, -1), Point(0, 1))
    vertices, edges = arrangement([a, b])
    assert len(vertices) == 5 and len(edges) == 4
    walk = covering_walk([a, b])
    assert len(walk) - 1 <= 8
    assert same_image(Polyline(tuple(walk)), [a, b])


def _walk_edges_in_arrangement(walk, segments):
    """Containment oracle: every walk step lies inside a segment and every
    arrangement edge is walked."""
    _, edges = arrangement(segments)
    steps = {frozenset(pair) for pair in zip(walk, walk[1:])}
    for st_ in steps:
        u, v = tuple(st_)
        if not any(segment_contains(s, Segment(u, v)) for s in segments):
            return False
    return steps == edges


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dcs_image_equals_union(n):
    for d in all_diagrams(n):
        ci = build_cover_instance(embed(d))
        si = build_dcs_instance(ci)
        walk = si.input.vertices
        _, edges = arrangement(ci.segments)
        assert len(walk) - 1 <= 2 * len(edges)
        assert _walk_edges_in_arrangement(walk, ci.segments)
        assert same_image(si.input, ci.segments)
        assert si.k == ci.k and si.delta == 0


def test_solve_dcs_zero_examples():
    ci = instance("1 2 3 1 2 3")
    out = solve_dcs_zero(build_dcs_instance(ci), ci)
    assert out is not None and len(out) == 9
    assert directed_hausdorff_leq(build_dcs_instance(ci).input, out, 0)
    ci = instance("1 1 2 2")
    assert solve_dcs_zero(build_dcs_instance(ci), ci) is None


def test_solve_dcs_zero_checks_its_input():
    ci = instance("1 2 1 2")
    si = build_dcs_instance(ci)
    with pytest.raises(ValueError):
        solve_dcs_zero(SimplificationInstance(si.input, si.k, Fraction(1, 8)), ci)
    with pytest.raises(ValueError):
        solve_dcs_zero(si, instance("1 1 2 2"))


def test_delta_bounds():
    assert safe_delta(instance("1 1")) == Fraction(3, 4)
    assert safe_delta(instance("1 2 1 2")) == Fraction(3, 8)
    assert safe_delta(instance("1 2 3 1 2 3")) == Fraction(1, 8)
    assert usable_delta(instance("1 2 3 1 2 3")) == Fraction(1, 16)
    ci = instance("1 2 1 2")
    with pytest.raises(ValueError):
        build_dcs_instance(ci, Fraction(3, 8))
    assert build_dcs_instance(ci, Fraction(3, 16)).delta == Fraction(3, 16)


def test_simplification_round_trip():
    si = build_dcs_instance(instance("1 2 1 2"), Fraction(3, 16))
    assert SimplificationInstance.parse(si.to_text()) == si


# -- cones and the horizontal gap formulas ----------------------------------


def test_dist_h_fixed_points():
    assert dist_h_disjoint(1, 2, 3) == 3
    assert dist_h_nested(1, 2, 3) == Fraction(3, 4)


@pytest.mark.parametrize("b", range(2, 9))
def test_dist_h_disjoint_closed_form(b):
    assert dist_h_disjoint(b - 1, b, b + 1) == Fraction(b * b, b - 1) - 1


@pytest.mark.parametrize("c", range(2, 9))
def test_dist_h_nested_closed_form(c):
    assert dist_h_nested(c - 1, c, c + 1) == 1 - Fraction(c - 1, c * c)


def _float_gap_disjoint(a, b, c):
    """x on the (a, b) chord line at height c!, minus c."""
    fa, fb, fc = factorial(a), factorial(b), factorial(c)
    return a + (fc - fa) * (b - a) / (fb - fa) - c


def test_dist_h_disjoint_is_a_minimum():
    # over all disjoint triples up to 8 the adjacent one at b = 2 is smallest
    vals = [
        _float_gap_disjoint(a, b, c)
        for a in range(1, 9) for b in range(a + 1, 9) for c in range(b + 1, 9)
    ]
    assert math.isclose(min(vals), 3)


def test_pair_case():
    assert pair_case((1, 3), (2, 4)) == "crossing"
    assert pair_case((1, 2), (3, 4)) == "disjoint"
    assert pair_case((1, 4), (2, 3)) == "nested"


def test_cone_geometry():
    s = Segment(Point(0, 0), Point(0, 4))
    cone = Cone(s, Fraction(1, 4))
    assert cone.offset == (Fraction(1, 2), 0)
    assert cone.left_bound.p == Point(Fraction(-1, 2), 0)
    assert cone.right_bound.q == Point(Fraction(-1, 2), 4)
    flat = Cone(Segment(Point(0, 0), Point(4, 0)), Fraction(1, 4))
    assert flat.offset == (0, Fraction(1, 2))


def test_tails_meet_zero_delta_are_rays():
    a = Segment(Point(0, 0), Point(1, 1))
    b = Segment(Point(3, 0), Point(2, 1))
    assert tails_meet(a, "q", b, "q", 0)
    assert not tails_meet(a, "p", b, "p", 0)
    # widening makes the backward tails meet far below
    assert tails_meet(a, "p", b, "p", Fraction(1, 2))


def test_cone_structure_zero_delta_is_clean():
    r = check_cone_structure(instance("1 2 3 1 2 3"), 0)
    assert r.ok and not r.leading_violations


@pytest.mark.parametrize("n", [2, 3])
def test_cone_structure_at_usable_delta(n):
    for d in all_diagrams(n):
        ci = build_cover_instance(embed(d))
        r = check_cone_structure(ci, usable_delta(ci))
        assert r.ok, (str(d), r.violations)
        cases = {p.case for p in r.pairs}
        assert cases <= {"crossing", "disjoint", "nested"}


def test_equivalence_nonzero_delta_k2():
    r = equivalence_nonzero_delta(instance("1 2 1 2"))
    assert r.delta == Fraction(3, 16)
    assert r.structure_preserved and r.verdict_zero and r.verdict_delta
    assert r.witness is not None and len(r.witness) == 7
