"""Core undirected graph type with packed-bit adjacency and set arithmetic.

Vertices are dense integers 0..n-1.  A Graph is immutable once built; all
operations here are pure functions, so values can be shared freely across
workers.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import bitset


class VertexSet:
    """A subset of {0..n-1} backed by a packed bit mask."""

    __slots__ = ("n", "mask")

    def __init__(self, n: int, mask: np.ndarray):
        self.n = n
        self.mask = mask

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls(n, bitset.zeros(n))

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(n, bitset.tail_mask(n))

    @classmethod
    def from_indices(cls, n: int, ids: Iterable[int]) -> "VertexSet":
        return cls(n, bitset.from_indices(n, ids))

    @property
    def cardinality(self) -> int:
        return bitset.popcount(self.mask)

    def members(self) -> np.ndarray:
        return bitset.to_indices(self.mask, self.n)

    def contains(self, v: int) -> bool:
        return bitset.get_bit(self.mask, v)

    def _check(self, other: "VertexSet") -> None:
        if self.n != other.n:
            raise ValueError(f"universe mismatch: {self.n} vs {other.n}")

    def union(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.mask | other.mask)

    def intersection(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.mask & other.mask)

    def difference(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.mask & ~other.mask)

    def symmetric_difference(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.mask ^ other.mask)

    def complement(self) -> "VertexSet":
        return VertexSet(self.n, ~self.mask & bitset.tail_mask(self.n))

    def __len__(self) -> int:
        return self.cardinality

    def __iter__(self):
        return iter(self.members().tolist())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VertexSet)
            and self.n == other.n
            and bool(np.array_equal(self.mask, other.mask))
        )

    def __repr__(self) -> str:
        ids = self.members()
        shown = ids[:12].tolist()
        tail = "..." if len(ids) > 12 else ""
        return f"VertexSet(n={self.n}, {{{', '.join(map(str, shown))}{tail}}})"


def symmetric_difference_size(a: VertexSet, b: VertexSet) -> int:
    """|a triangle b|, exact."""
    if a.n != b.n:
        raise ValueError(f"universe mismatch: {a.n} vs {b.n}")
    return bitset.popcount(a.mask ^ b.mask)


class Graph:
    """Simple undirected graph: symmetric packed adjacency, zero diagonal."""

    __slots__ = ("n", "_rows")

    def __init__(self, n: int, rows: np.ndarray, _validate: bool = True):
        if _validate:
            _validate_rows(n, rows)
        rows.setflags(write=False)
        self.n = n
        self._rows = rows

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros((n, bitset.word_count(n)), dtype=np.uint64), _validate=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        b = GraphBuilder(n)
        for u, v in edges:
            b.add_edge(u, v)
        return b.build()

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.empty(n).complement()

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    def row(self, v: int) -> np.ndarray:
        return self._rows[v]

    @property
    def edge_count(self) -> int:
        return int(bitset.row_popcounts(self._rows).sum()) // 2

    def degrees(self) -> np.ndarray:
        return bitset.row_popcounts(self._rows)

    def has_edge(self, u: int, v: int) -> bool:
        return bitset.get_bit(self._rows[u], v)

    def neighbors(self, v: int) -> np.ndarray:
        return bitset.to_indices(self._rows[v], self.n)

    def edges(self):
        """Yield edges (u, v) with u < v in lexicographic order."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if v > u:
                    yield (u, int(v))

    def complement(self) -> "Graph":
        rows = self._rows ^ bitset.tail_mask(self.n)
        bitset.clear_diagonal(rows, self.n)
        return Graph(self.n, rows, _validate=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and bool(np.array_equal(self._rows, other._rows))
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def _validate_rows(n: int, rows: np.ndarray) -> None:
    if rows.shape != (n, bitset.word_count(n)):
        raise ValueError(f"adjacency shape {rows.shape} does not match n={n}")
    if rows.dtype != np.uint64:
        raise ValueError("adjacency rows must be uint64")
    if n == 0:
        return
    tail = bitset.tail_mask(n)
    if np.any(rows & ~tail):
        raise ValueError("padding bits above n-1 must be zero")
    idx = np.arange(n)
    diag = (rows[idx, idx // 64] >> (idx % 64).astype(np.uint64)) & np.uint64(1)
    if np.any(diag):
        raise ValueError("loops are not allowed")
    if not np.array_equal(rows, bitset.transpose(rows, n)):
        raise ValueError("adjacency must be symmetric")


class GraphBuilder:
    """Mutable adjacency owned by a single thread until build()."""

    def __init__(self, n: int):
        self.n = n
        self.rows = np.zeros((n, bitset.word_count(n)), dtype=np.uint64)

    def _check_pair(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"loop at vertex {u} not allowed")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")

    def add_edge(self, u: int, v: int) -> None:
        self._check_pair(u, v)
        bitset.set_bit(self.rows[u], v)
        bitset.set_bit(self.rows[v], u)

    def remove_edge(self, u: int, v: int) -> None:
        self._check_pair(u, v)
        bitset.clear_bit(self.rows[u], v)
        bitset.clear_bit(self.rows[v], u)

    def toggle_edge(self, u: int, v: int) -> None:
        self._check_pair(u, v)
        self.rows[u, v // 64] ^= np.uint64(1) << np.uint64(v % 64)
        self.rows[v, u // 64] ^= np.uint64(1) << np.uint64(u % 64)

    def has_edge(self, u: int, v: int) -> bool:
        return bitset.get_bit(self.rows[u], v)

    def build(self) -> Graph:
        g = Graph(self.n, self.rows, _validate=False)
        self.rows = self.rows.copy()  # keep builder usable without aliasing
        return g


def degeneracy(g: Graph) -> tuple[int, list[int]]:
    """Minimum d over peel orders, plus a witness removal order.

    Reading the witness in reverse gives an ordering where every vertex
    has at most d neighbors before it.  Bucketed min-degree peeling,
    O(n + m).
    """
    n = g.n
    if n == 0:
        return 0, []
    degs = g.degrees().astype(np.int64)
    max_deg = int(degs.max())
    buckets: list[list[int]] = [[] for _ in range(max_deg + 1)]
    for v in range(n):
        buckets[int(degs[v])].append(v)
    # buckets hold possibly stale entries; check degree at pop time
    alive = np.ones(n, dtype=bool)
    cur_deg = degs.copy()
    order: list[int] = []
    d = 0
    heads = [0] * (max_deg + 1)
    scan_from = 0  # min degree can drop by at most 1 per removal
    removed = 0
    while removed < n:
        v = -1
        b = scan_from
        while b <= max_deg:
            lst = buckets[b]
            while heads[b] < len(lst):
                cand = lst[heads[b]]
                if alive[cand] and cur_deg[cand] == b:
                    v = cand
                    break
                heads[b] += 1
            if v >= 0:
                break
            b += 1
        assert v >= 0
        d = max(d, b)
        scan_from = max(0, b - 1)
        alive[v] = False
        order.append(v)
        removed += 1
        nbrs = bitset.to_indices(g.row(v), n)
        nbrs = nbrs[alive[nbrs]]
        if nbrs.size:
            cur_deg[nbrs] -= 1
            for u in nbrs.tolist():
                buckets[cur_deg[u]].append(u)
    return d, order


def twin_classes(g: Graph) -> list[list[int]]:
    """Partition of V into twin classes (neighborhoods equal outside the pair).

    Non-adjacent twins have identical rows; adjacent twins have identical
    rows once each vertex's own bit is set.  Classes are returned sorted
    by smallest member, members ascending.
    """
    n = g.n
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    plain: dict[bytes, int] = {}
    closed: dict[bytes, int] = {}
    for v in range(n):
        row = g.row(v)
        key = row.tobytes()
        if key in plain:
            union(plain[key], v)
        else:
            plain[key] = v
        with_self = row.copy()
        bitset.set_bit(with_self, v)
        key2 = with_self.tobytes()
        if key2 in closed:
            union(closed[key2], v)
        else:
            closed[key2] = v
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return [sorted(groups[r]) for r in sorted(groups)]


def graph_symmetric_difference(a: Graph, b: Graph) -> Graph:
    """Graph whose edge set is the exact symmetric difference."""
    if a.n != b.n:
        raise ValueError(f"vertex count mismatch: {a.n} vs {b.n}")
    return Graph(a.n, a.rows ^ b.rows, _validate=False)


def induced_subgraph(g: Graph, w: VertexSet) -> tuple[Graph, np.ndarray]:
    """Subgraph on w plus the relabeling map (new id -> original id)."""
    if w.n != g.n:
        raise ValueError(f"universe mismatch: {w.n} vs {g.n}")
    ids = w.members()
    k = ids.size
    if k == 0:
        return Graph.empty(0), ids
    out = np.zeros((k, bitset.word_count(k)), dtype=np.uint64)
    for start in range(0, k, 4096):
        stop = min(start + 4096, k)
        block = np.unpackbits(
            g.rows[ids[start:stop]].view(np.uint8), axis=1, bitorder="little"
        )[:, :g.n]
        out[start:stop] = bitset.pack(np.ascontiguousarray(block[:, ids]))
    return Graph(k, out, _validate=False), ids


def disagreement_vertices(a: Graph, b: Graph) -> VertexSet:
    """Vertices whose incidence rows differ between a and b.

    Deleting this set from both graphs yields identical remainders.
    """
    if a.n != b.n:
        raise ValueError(f"vertex count mismatch: {a.n} vs {b.n}")
    diff = np.any(a.rows != b.rows, axis=1) if a.n else np.zeros(0, dtype=bool)
    return VertexSet(a.n, bitset.pack(diff.astype(np.uint8)) if a.n else bitset.zeros(0))
