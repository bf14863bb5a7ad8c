"""Chord diagrams, circle graphs and exact Hamiltonian path/cycle solvers."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional, Sequence


@dataclass(frozen=True)
class ChordDiagram:
    """Chord endpoints read clockwise around the circle.

    Each label in ``1..n`` occurs exactly twice in ``endpoint_order``.
    """

    endpoint_order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(v) for v in self.endpoint_order)
        object.__setattr__(self, "endpoint_order", order)
        if len(order) % 2:
            raise ValueError("a chord diagram needs an even number of endpoints")
        n = len(order) // 2
        counts = {}
        for label in order:
            counts[label] = counts.get(label, 0) + 1
        if set(counts) != set(range(1, n + 1)) or any(c != 2 for c in counts.values()):
            raise ValueError(
                f"labels must be 1..{n}, each appearing exactly twice: {order}"
            )

    @property
    def n(self) -> int:
        return len(self.endpoint_order) // 2

    @property
    def labels(self) -> range:
        return range(1, self.n + 1)

    def positions(self) -> dict[int, tuple[int, int]]:
        """0-based positions of both endpoints of every chord."""
        pos: dict[int, list[int]] = {}
        for i, label in enumerate(self.endpoint_order):
            pos.setdefault(label, []).append(i)
        return {label: (p[0], p[1]) for label, p in pos.items()}

    def rotated(self, k: int) -> "ChordDiagram":
        k %= max(len(self.endpoint_order), 1)
        return ChordDiagram(self.endpoint_order[k:] + self.endpoint_order[:k])

    def __str__(self):
        return " ".join(str(v) for v in self.endpoint_order)

    @classmethod
    def parse(cls, text: str) -> "ChordDiagram":
        return cls(tuple(int(tok) for tok in text.split()))


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            u, v = tuple(e)
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (1 <= u <= self.vertex_count and 1 <= v <= self.vertex_count):
                raise ValueError(f"edge {u}-{v} outside 1..{self.vertex_count}")
            norm.add(frozenset((u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        return cls(vertex_count, frozenset(frozenset(p) for p in pairs))

    def has_edge(self, u: int, v: int) -> bool:
        return frozenset((u, v)) in self.edges

    def neighbours(self) -> dict[int, set[int]]:
        adj = {v: set() for v in range(1, self.vertex_count + 1)}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def to_text(self) -> str:
        lines = [f"n={self.vertex_count}"]
        lines += [f"{u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Graph":
        vertex_count = None
        pairs = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("n="):
                vertex_count = int(line[2:])
                continue
            u, v = (int(t) for t in line.split())
            pairs.append((u, v))
        if vertex_count is None:
            vertex_count = max((max(p) for p in pairs), default=0)
        return cls.from_pairs(vertex_count, pairs)


def intersection_graph(d: ChordDiagram) -> Graph:
    """Circle graph: chords u, v adjacent iff their endpoints interleave."""
    pos = d.positions()
    pairs = []
    for u, v in combinations(d.labels, 2):
        u1, u2 = pos[u]
        inside = sum(u1 < p < u2 for p in pos[v])
        if inside == 1:
            pairs.append((u, v))
    return Graph.from_pairs(d.n, pairs)


def _bitmask_adjacency(g: Graph) -> list[int]:
    adj = [0] * g.vertex_count
    for e in g.edges:
        u, v = tuple(e)
        adj[u - 1] |= 1 << (v - 1)
        adj[v - 1] |= 1 << (u - 1)
    return adj


def _reach_table(adj: list[int], n: int, start_mask: int) -> list[int]:
    """reach[mask] = bitmask of vertices v such that some path covering exactly
    ``mask`` starts in ``start_mask`` and ends at v."""
    full = 1 << n
    reach = [0] * full
    for v in range(n):
        if start_mask >> v & 1:
            reach[1 << v] |= 1 << v
    for mask in range(1, full):
        ends = reach[mask]
        while ends:
            low = ends & -ends
            v = low.bit_length() - 1
            ends ^= low
            nxt = adj[v] & ~mask
            while nxt:
                wbit = nxt & -nxt
                nxt ^= wbit
                reach[mask | wbit] |= wbit
    return reach


def _walk_back(reach: list[int], adj: list[int], mask: int, end: int) -> list[int]:
    path = [end]
    while mask != 1 << end:
        prev_mask = mask ^ (1 << end)
        cands = reach[prev_mask] & adj[end]
        prev = (cands & -cands).bit_length() - 1
        path.append(prev)
        mask, end = prev_mask, prev
    path.reverse()
    return path


def hamiltonian_path(g: Graph) -> Optional[list[int]]:
    """A Hamiltonian path (1-based vertex list) or ``None``; subset DP."""
    n = g.vertex_count
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    adj = _bitmask_adjacency(g)
    full = (1 << n) - 1
    reach = _reach_table(adj, n, full)
    ends = reach[full]
    if not ends:
        return None
    end = (ends & -ends).bit_length() - 1
    return [v + 1 for v in _walk_back(reach, adj, full, end)]


def hamiltonian_cycle(g: Graph) -> Optional[list[int]]:
    """A Hamiltonian cycle as a cyclic vertex order starting at vertex 1.

    A cyclic order qualifies when every consecutive pair, including last to
    first, is an edge.  With two vertices this is the single edge walked both
    ways; a lone vertex never has a cycle.
    """
    n = g.vertex_count
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    if n == 1:
        return None
    adj = _bitmask_adjacency(g)
    full = (1 << n) - 1
    reach = _reach_table(adj, n, 1)
    ends = reach[full] & adj[0]
    if not ends:
        return None
    end = (ends & -ends).bit_length() - 1
    return [v + 1 for v in _walk_back(reach, adj, full, end)]


def is_hamiltonian_path(g: Graph, path: Sequence[int]) -> bool:
    if sorted(path) != list(range(1, g.vertex_count + 1)):
        return False
    return all(g.has_edge(u, v) for u, v in zip(path, path[1:]))


def is_hamiltonian_cycle(g: Graph, cycle: Sequence[int]) -> bool:
    if len(cycle) < 2 or not is_hamiltonian_path(g, cycle):
        return False
    return g.has_edge(cycle[-1], cycle[0])


def naive_hamiltonian_path(g: Graph) -> Optional[list[int]]:
    """Permutation enumeration; reference oracle for small graphs."""
    for perm in permutations(range(1, g.vertex_count + 1)):
        if is_hamiltonian_path(g, perm):
            return list(perm)
    return None


def naive_hamiltonian_cycle(g: Graph) -> Optional[list[int]]:
    n = g.vertex_count
    if n < 2:
        return None
    for rest in permutations(range(2, n + 1)):
        cycle = [1, *rest]
        if is_hamiltonian_cycle(g, cycle):
            return cycle
    return None


def cycle_to_path_gadget(d: ChordDiagram, x: int) -> ChordDiagram:
    """Split chord ``x`` into two parallel twins, each with a pendant chord.

    The twins keep label ``x`` and get ``n+1``; the pendants are ``n+2``
    (crossing only ``x``) and ``n+3`` (crossing only ``n+1``).  The result has
    a Hamiltonian path iff ``d``'s circle graph has a Hamiltonian cycle.
    """
    if x not in d.labels:
        raise ValueError(f"chord {x} is not in the diagram")
    n = d.n
    x1, x2, p1, p2 = x, n + 1, n + 2, n + 3
    out: list[int] = []
    seen_first = False
    for label in d.endpoint_order:
        if label != x:
            out.append(label)
        elif not seen_first:
            out += [p1, x1, p1, x2]
            seen_first = True
        else:
            out += [p2, x2, p2, x1]
    return ChordDiagram(tuple(out))


def canonical_form(order: Sequence[int]) -> tuple[int, ...]:
    """Relabel chords in order of first appearance."""
    names: dict[int, int] = {}
    for label in order:
        if label not in names:
            names[label] = len(names) + 1
    return tuple(names[label] for label in order)


def all_diagrams(n: int) -> Iterator[ChordDiagram]:
    """Every chord diagram with ``n`` chords, up to relabeling ((2n-1)!! of them)."""

    def match(slots: list[Optional[int]], next_label: int):
        try:
            i = slots.index(None)
        except ValueError:
            yield ChordDiagram(tuple(slots))  # type: ignore[arg-type]
            return
        slots[i] = next_label
        for j in range(i + 1, len(slots)):
            if slots[j] is None:
                slots[j] = next_label
                yield from match(slots, next_label + 1)
                slots[j] = None
        slots[i] = None

    yield from match([None] * (2 * n), 1)
