from itertools import permutations, product

import pytest
from hypothesis import assume, given, settings, strategies as st

from circleray.chord_graph import (
    ChordDiagram,
    all_diagrams,
    hamiltonian_path,
    intersection_graph,
    is_hamiltonian_path,
)
from circleray.cover_solver import (
    CoverWitness,
    GuardError,
    Polyline,
    extract_hamiltonian_path,
    solve_cover,
    verify_cover,
)
from circleray.exact_geom import Point, Segment, line_intersect
from circleray.needle_reduce import LEADING, CoverInstance, build_cover_instance, general_position
from circleray.ray_embed import embed

from conftest import points


def instance(text):
    return build_cover_instance(embed(ChordDiagram.parse(text)))


@pytest.mark.parametrize(
    "text, links",
    [("1 1", 5), ("1 2 1 2", 7), ("1 2 3 1 2 3", 9)],
)
def test_witness_sizes(text, links):
    ci = instance(text)
    w = solve_cover(ci)
    assert w is not None and len(w.polyline) == links
    assert verify_cover(ci, w.polyline)


def test_edgeless_pair_has_no_cover():
    assert solve_cover(instance("1 1 2 2")) is None
    assert solve_cover(instance("1 1 2 2"), pruned=False) is None


def test_extracted_paths():
    for text, allowed in [("1 1", [[1]]), ("1 2 1 2", [[1, 2], [2, 1]])]:
        ci = instance(text)
        assert extract_hamiltonian_path(solve_cover(ci), ci) in allowed
    ci = instance("1 2 3 1 2 3")
    path = extract_hamiltonian_path(solve_cover(ci), ci)
    assert sorted(path) == [1, 2, 3]


def _hand_built(ci: CoverInstance, chord_order):
    """Polyline through the leading segments then the needles in the given order,
    trying both halves first for each needle."""
    for flips in product((False, True), repeat=len(chord_order)):
        labels = list(LEADING)
        for chord, flip in zip(chord_order, flips):
            labels += [f"{chord}R", f"{chord}L"] if flip else [f"{chord}L", f"{chord}R"]
        segs = [ci.segment(label) for label in labels]
        inner = [
            line_intersect(a.supporting_line(), b.supporting_line())
            for a, b in zip(segs, segs[1:])
        ]
        for start, end in product((segs[0].p, segs[0].q), (segs[-1].p, segs[-1].q)):
            try:
                p = Polyline((start, *inner, end))
            except ValueError:
                continue
            if verify_cover(ci, p):
                return p
    return None


def test_hand_built_witness_for_k3():
    ci = instance("1 2 3 1 2 3")
    p = _hand_built(ci, [1, 2, 3])
    assert p is not None and len(p) == 9
    # dropping the last needle leaves a segment uncovered
    shorter = Polyline(p.vertices[:-2])
    assert not verify_cover(ci, shorter)


def test_single_segment_cover():
    s = Segment(Point(0, 0), Point(1, 2))
    ci = CoverInstance((s,), ("a",), 1)
    assert verify_cover(ci, Polyline((s.p, s.q)))
    w = solve_cover(ci)
    assert w is not None and w.polyline.vertices == (s.p, s.q)


def test_verify_rejects_too_many_links():
    s = Segment(Point(0, 0), Point(2, 0))
    ci = CoverInstance((s,), ("a",), 1)
    assert not verify_cover(ci, Polyline((Point(0, 0), Point(1, 0), Point(2, 0))))


def test_guards():
    ci = instance("1 2 3 4 5 1 2 3 4 5")
    assert len(ci.segments) == 13
    big = CoverInstance(ci.segments, ci.labels, ci.k)
    with pytest.raises(GuardError):
        solve_cover(big, max_segments=12)
    over = CoverInstance(ci.segments[:4], ci.labels[:4], 5)
    with pytest.raises(GuardError):
        solve_cover(over)
    a = Segment(Point(0, 0), Point(1, 0))
    b = Segment(Point(2, 0), Point(3, 0))
    with pytest.raises(GuardError):
        solve_cover(CoverInstance((a, b), ("a", "b"), 2))
    with pytest.raises(GuardError):
        solve_cover(CoverInstance((a,), ("a",), 1), pruned=True)


def test_budget_below_segment_count_is_infeasible():
    ci = instance("1 2 1 2")
    assert solve_cover(CoverInstance(ci.segments, ci.labels, ci.k - 1, ci.meta)) is None


def _brute_force(ci: CoverInstance) -> bool:
    segs = ci.segments
    for order in permutations(range(len(segs))):
        ss = [segs[i] for i in order]
        inner = [line_intersect(a.supporting_line(), b.supporting_line()) for a, b in zip(ss, ss[1:])]
        if any(not isinstance(c, Point) for c in inner):
            continue
        for start, end in product((ss[0].p, ss[0].q), (ss[-1].p, ss[-1].q)):
            try:
                p = Polyline((start, *inner, end))
            except ValueError:
                continue
            if verify_cover(ci, p):
                return True
    return False


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(points, points), min_size=1, max_size=4))
def test_generic_solver_matches_brute_force(raw):
    assume(all(a != b for a, b in raw))
    segs = tuple(Segment(a, b) for a, b in raw)
    assume(general_position(segs))
    ci = CoverInstance(segs, tuple(f"s{i}" for i in range(len(segs))), len(segs))
    w = solve_cover(ci)
    assert (w is not None) == _brute_force(ci)
    if w is not None:
        assert verify_cover(ci, w.polyline)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pruned_matches_unpruned(n):
    for d in all_diagrams(n):
        ci = build_cover_instance(embed(d))
        a, b = solve_cover(ci), solve_cover(ci, pruned=False)
        assert (a is None) == (b is None)
        assert (a is None) == (hamiltonian_path(intersection_graph(d)) is None)


def test_threads_give_same_answer():
    for d in all_diagrams(3):
        ci = build_cover_instance(embed(d))
        one, many = solve_cover(ci, pruned=False), solve_cover(ci, pruned=False, threads=4)
        assert (one is None) == (many is None)
        if one is not None:
            assert one.order == many.order


def test_unpruned_witness_still_extracts():
    ci = instance("1 2 3 1 2 3")
    w = solve_cover(ci, pruned=False)
    path = extract_hamiltonian_path(w, ci)
    assert is_hamiltonian_path(intersection_graph(ChordDiagram.parse("1 2 3 1 2 3")), path)


def test_witness_round_trip():
    ci = instance("1 2 1 2")
    w = solve_cover(ci)
    back = CoverWitness.parse(w.to_text(), ci.labels)
    assert back.polyline == w.polyline and back.assignment == w.assignment
    assert back.order == w.order
    assert Polyline.parse(w.polyline.to_text()) == w.polyline


def test_extract_rejects_bad_witness():
    ci = instance("1 2 1 2")
    w = solve_cover(ci)
    broken = dict(w.assignment)
    broken["1L"], broken["s_h"] = broken["s_h"], broken["1L"]
    with pytest.raises(ValueError):
        extract_hamiltonian_path(CoverWitness(w.polyline, broken), ci)
