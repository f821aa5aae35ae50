"""Patterns, partitions, and the complementation operator.

A pattern is a small graph on "nodes" (loops allowed) used to transform a
graph: edges inside the part of a loop node and between the parts of two
adjacent nodes are complemented.  Patterns never contain a mergeable twin
pair (adjacent twins both with loops, or non-adjacent twins without), so
the transformation has no redundant description.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import bitset
from .graph import Graph, VertexSet, induced_subgraph, twin_classes


@dataclass(frozen=True)
class Pattern:
    """Node-indexed loop-allowing graph; validity is checked by is_pattern."""

    nodes: int
    edges: frozenset = field(default_factory=frozenset)   # pairs (u, v), u < v
    loops: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset((min(u, v), max(u, v)) for u, v in self.edges))
        object.__setattr__(self, "loops", frozenset(self.loops))
        for u, v in self.edges:
            if not (0 <= u < self.nodes and 0 <= v < self.nodes) or u == v:
                raise ValueError(f"pattern edge ({u},{v}) out of range for {self.nodes} nodes")
        for u in self.loops:
            if not 0 <= u < self.nodes:
                raise ValueError(f"pattern loop {u} out of range for {self.nodes} nodes")

    def has_loop(self, u: int) -> bool:
        return u in self.loops

    def adjacent(self, u: int, v: int) -> bool:
        """Whether the pair (u, v) is complemented; u == v asks about the loop."""
        if u == v:
            return u in self.loops
        return (min(u, v), max(u, v)) in self.edges

    def neighbor_nodes(self, u: int) -> list[int]:
        """Nodes adjacent to u, including u itself iff u has a loop."""
        out = [v for v in range(self.nodes) if v != u and self.adjacent(u, v)]
        if u in self.loops:
            out.append(u)
        return sorted(out)


def first_forbidden_twins(p: Pattern) -> Optional[tuple[int, int]]:
    """Smallest mergeable node pair, or None if p is a valid pattern."""
    for u in range(p.nodes):
        for v in range(u + 1, p.nodes):
            if any(p.adjacent(u, w) != p.adjacent(v, w) for w in range(p.nodes) if w != u and w != v):
                continue
            both_loops = p.has_loop(u) and p.has_loop(v)
            no_loops = not p.has_loop(u) and not p.has_loop(v)
            if p.adjacent(u, v):
                if both_loops:
                    return (u, v)
            else:
                if no_loops:
                    return (u, v)
    return None


def is_pattern(p: Pattern) -> bool:
    return first_forbidden_twins(p) is None


class PartitionedGraph:
    """A graph together with a pattern and a vertex -> node assignment."""

    __slots__ = ("graph", "pattern", "assignment")

    def __init__(self, graph: Graph, pattern: Pattern, assignment):
        assignment = np.asarray(assignment, dtype=np.int32)
        if assignment.shape != (graph.n,):
            raise ValueError(f"assignment length {assignment.shape} does not match n={graph.n}")
        if graph.n and (assignment.min() < 0 or assignment.max() >= pattern.nodes):
            raise ValueError("assignment maps outside the pattern's nodes")
        assignment.setflags(write=False)
        self.graph = graph
        self.pattern = pattern
        self.assignment = assignment

    def part(self, u: int) -> VertexSet:
        if not 0 <= u < self.pattern.nodes:
            raise KeyError(f"no node {u} in pattern with {self.pattern.nodes} nodes")
        return VertexSet(self.graph.n, bitset.pack((self.assignment == u).astype(np.uint8))
                         if self.graph.n else bitset.zeros(0))

    def part_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.pattern.nodes).astype(np.int64)

    def part_masks(self) -> np.ndarray:
        """(K, words) matrix; row u is the bit mask of part u."""
        k = self.pattern.nodes
        w = bitset.word_count(self.graph.n)
        masks = np.zeros((k, w), dtype=np.uint64)
        for u in range(k):
            masks[u] = self.part(u).mask
        return masks

    def flip_masks(self) -> np.ndarray:
        """(K, words) matrix; row u is the union of parts complemented against u."""
        parts = self.part_masks()
        k = self.pattern.nodes
        w = bitset.word_count(self.graph.n)
        flips = np.zeros((k, w), dtype=np.uint64)
        for u in range(k):
            for v in self.pattern.neighbor_nodes(u):
                flips[u] |= parts[v]
        return flips


def apply_pattern(pg: PartitionedGraph) -> Graph:
    """Complement edges inside loop parts and between parts of adjacent nodes.

    Implemented as one XOR of each vertex row against its node's flip mask;
    the diagonal is cleared so no loops are created.
    """
    n = pg.graph.n
    if n == 0:
        return Graph.empty(0)
    rows = pg.graph.rows ^ pg.flip_masks()[pg.assignment]
    bitset.clear_diagonal(rows, n)
    return Graph(n, rows, _validate=False)


def perfect_blowup(pg: PartitionedGraph) -> Graph:
    """The pattern applied to the edgeless graph on the same vertex set."""
    n = pg.graph.n
    if n == 0:
        return Graph.empty(0)
    rows = pg.flip_masks()[pg.assignment].copy()
    bitset.clear_diagonal(rows, n)
    return Graph(n, rows, _validate=False)


def restrict_partitioned(pg: PartitionedGraph, w: VertexSet) -> tuple[PartitionedGraph, np.ndarray]:
    """Induced restriction to w, keeping the pattern; parts may become empty."""
    sub, ids = induced_subgraph(pg.graph, w)
    return PartitionedGraph(sub, pg.pattern, pg.assignment[ids]), ids


def reduce_pattern(pg: PartitionedGraph, removed_nodes: Iterable[int] = ()) -> PartitionedGraph:
    """Drop the given nodes (and their vertices), then merge mergeable twins.

    Twin pairs are merged in ascending index order until the result is a
    valid pattern; surviving nodes are relabeled by the smallest original
    node index they contain, which makes the output canonical.
    """
    removed = set(removed_nodes)
    for u in removed:
        if not 0 <= u < pg.pattern.nodes:
            raise KeyError(f"no node {u} in pattern with {pg.pattern.nodes} nodes")
    keep_nodes = [u for u in range(pg.pattern.nodes) if u not in removed]
    keep_mask = np.isin(pg.assignment, keep_nodes) if pg.graph.n else np.zeros(0, dtype=bool)
    w = VertexSet(pg.graph.n, bitset.pack(keep_mask.astype(np.uint8)) if pg.graph.n else bitset.zeros(0))
    sub, ids = induced_subgraph(pg.graph, w)
    sub_assign = pg.assignment[ids] if ids.size else np.zeros(0, dtype=np.int32)

    # groups[i] = set of original node ids currently merged into slot i
    groups: list[list[int]] = [[u] for u in keep_nodes]
    adj = {
        (i, j): pg.pattern.adjacent(keep_nodes[i], keep_nodes[j])
        for i in range(len(keep_nodes))
        for j in range(i + 1, len(keep_nodes))
    }
    loops = [pg.pattern.has_loop(u) for u in keep_nodes]

    def adjacent(i: int, j: int) -> bool:
        return adj[(min(i, j), max(i, j))] if i != j else loops[i]

    live = list(range(len(keep_nodes)))
    while True:
        merged = False
        for ai in range(len(live)):
            for bj in range(ai + 1, len(live)):
                i, j = live[ai], live[bj]
                if any(adjacent(i, x) != adjacent(j, x) for x in live if x != i and x != j):
                    continue
                e = adjacent(i, j)
                if (e and loops[i] and loops[j]) or (not e and not loops[i] and not loops[j]):
                    groups[i].extend(groups[j])
                    live.pop(bj)
                    merged = True
                    break
            if merged:
                break
        if not merged:
            break

    # canonical order: smallest contained original node index
    live_sorted = sorted(live, key=lambda i: min(groups[i]))
    new_index = {i: t for t, i in enumerate(live_sorted)}
    new_edges = set()
    for a in range(len(live_sorted)):
        for b in range(a + 1, len(live_sorted)):
            if adjacent(live_sorted[a], live_sorted[b]):
                new_edges.add((a, b))
    new_loops = {new_index[i] for i in live_sorted if loops[i]}
    new_pattern = Pattern(len(live_sorted), frozenset(new_edges), frozenset(new_loops))

    orig_to_new = {}
    for i in live_sorted:
        for orig in groups[i]:
            orig_to_new[orig] = new_index[i]
    new_assign = np.array([orig_to_new[int(u)] for u in sub_assign], dtype=np.int32)
    return PartitionedGraph(sub, new_pattern, new_assign)


def blowup_to_pattern(f: Graph) -> PartitionedGraph:
    """Pattern and partition whose blow-up of the edgeless graph equals f.

    The twin classes of f form the parts: a class induces a complete or
    empty subgraph (loop or not), and adjacency between classes is
    constant.  Single-vertex classes carry no loop.
    """
    classes = twin_classes(f)
    assignment = np.empty(f.n, dtype=np.int32)
    for i, cls in enumerate(classes):
        assignment[cls] = i
    loops = frozenset(
        i for i, cls in enumerate(classes)
        if len(cls) >= 2 and f.has_edge(cls[0], cls[1])
    )
    edges = frozenset(
        (i, j)
        for i in range(len(classes))
        for j in range(i + 1, len(classes))
        if f.has_edge(classes[i][0], classes[j][0])
    )
    pg = PartitionedGraph(Graph.empty(f.n), Pattern(len(classes), edges, loops), assignment)
    if perfect_blowup(pg) != f:
        raise ValueError("graph is not a blow-up of any pattern")  # unreachable for valid twins
    return pg


@dataclass
class SubsetList:
    """Ordered complementation subsets over a common vertex universe."""

    n: int
    subsets: list[VertexSet] = field(default_factory=list)

    def __post_init__(self):
        for s in self.subsets:
            if s.n != self.n:
                raise ValueError(f"subset universe {s.n} does not match {self.n}")

    def __len__(self) -> int:
        return len(self.subsets)

    def __iter__(self):
        return iter(self.subsets)


def complement_on_subsets(g: Graph, subsets: SubsetList) -> Graph:
    """Sequentially complement all edges inside each subset."""
    if subsets.n != g.n:
        raise ValueError(f"universe mismatch: {subsets.n} vs {g.n}")
    n = g.n
    if n == 0:
        return Graph.empty(0)
    rows = g.rows.copy()
    for s in subsets:
        sel = bitset.unpack(s.mask, n).astype(bool)
        rows[sel] ^= s.mask
    bitset.clear_diagonal(rows, n)
    return Graph(n, rows, _validate=False)


def subsets_to_pattern(g: Graph, subsets: SubsetList) -> PartitionedGraph:
    """Pattern equivalent of complementing on the given subsets.

    Vertices sharing a membership signature across the subsets form one
    cell; a cell gets a loop iff it lies in an odd number of subsets and
    two cells are adjacent iff an odd number of subsets contain both.
    Mergeable cells are then reduced away.
    """
    if subsets.n != g.n:
        raise ValueError(f"universe mismatch: {subsets.n} vs {g.n}")
    k = len(subsets)
    if k > 62:
        raise ValueError("at most 62 subsets supported")
    n = g.n
    sig = np.zeros(n, dtype=np.int64)
    for i, s in enumerate(subsets):
        sig |= bitset.unpack(s.mask, n).astype(np.int64) << i
    cells = np.unique(sig) if n else np.zeros(0, dtype=np.int64)
    assignment = np.searchsorted(cells, sig).astype(np.int32)
    loops = set()
    edges = set()
    for a in range(cells.size):
        if int(cells[a]).bit_count() % 2 == 1:
            loops.add(a)
        for b in range(a + 1, cells.size):
            if (int(cells[a]) & int(cells[b])).bit_count() % 2 == 1:
                edges.add((a, b))
    pg = PartitionedGraph(g, Pattern(cells.size, frozenset(edges), frozenset(loops)), assignment)
    return reduce_pattern(pg)


def pattern_to_subsets(pg: PartitionedGraph) -> SubsetList:
    """Subsets whose sequential complementation equals applying the pattern.

    Complementing between two parts equals complementing on their union
    and then on each part, and repeated complementations of the same part
    cancel pairwise.  So the list is one union-set per pattern edge plus,
    per node, its part when the node's edge count plus loop is odd: at
    most K + K(K-1)/2 subsets.
    """
    n = pg.graph.n
    out: list[VertexSet] = []
    parts = pg.part_masks()
    intra_flips = [1 if pg.pattern.has_loop(u) else 0 for u in range(pg.pattern.nodes)]
    for u, v in sorted(pg.pattern.edges):
        out.append(VertexSet(n, parts[u] | parts[v]))
        intra_flips[u] += 1
        intra_flips[v] += 1
    for u in range(pg.pattern.nodes):
        if intra_flips[u] % 2 == 1:
            out.append(VertexSet(n, parts[u].copy()))
    return SubsetList(n, out)
