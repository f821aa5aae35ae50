"""Neighborhood similarity, perfect sets, and the structural-law checkers.

Two vertices are k-similar when the symmetric difference of their
neighborhoods has size at most k; the bits at the two vertices' own
positions are masked out of both rows first, so true twins are 0-similar
whether or not they are adjacent.  Set-versus-set comparisons (a
neighborhood against an arbitrary vertex set) use the plain symmetric
difference with no masking.

Computing every vertex's similarity degree by brute force is an all-pairs
row scan; instead rows are decomposed against a few greedily chosen
reference rows, so a pair's distance splits into a per-pair constant plus
per-vertex terms, with the sparse exceptions patched by exact popcounts.
The result is exact for every input; the decomposition only affects speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bitset
from .graph import Graph, VertexSet
from .parallel import run_blocked
from .pattern import PartitionedGraph, apply_pattern


class PreconditionError(ValueError):
    """A checker's stated size precondition does not hold."""


def _masked_pair_distance(rows: np.ndarray, v: int, vp: int) -> int:
    x = rows[v] ^ rows[vp]
    d = bitset.popcount(x)
    d -= int(bitset.get_bit(x, v)) + int(bitset.get_bit(x, vp))
    return d


def similarity_degree(h: Graph, w: VertexSet, v: int, k: int) -> int:
    """Number of vertices of w (other than v) whose neighborhood inside
    h[w] is k-similar to v's."""
    if w.n != h.n:
        raise ValueError(f"universe mismatch: {w.n} vs {h.n}")
    if not w.contains(v):
        raise ValueError(f"vertex {v} is not in the queried set")
    members = w.members()
    rows = h.rows[members] & w.mask
    me = int(np.searchsorted(members, v))
    xor = rows ^ rows[me]
    d = bitset.row_popcounts(xor)
    vw, vb = v // 64, np.uint64(v % 64)
    d -= ((xor[:, vw] >> vb) & np.uint64(1)).astype(np.int64)
    bits = (members % 64).astype(np.uint64)
    d -= ((xor[np.arange(members.size), members // 64] >> bits) & np.uint64(1)).astype(np.int64)
    d[me] = k + 1  # exclude v itself
    return int((d <= k).sum())


def similarity_degrees(h: Graph, w: VertexSet, k: int, threads: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Exact similarity degree of every member of w, in member order."""
    if w.n != h.n:
        raise ValueError(f"universe mismatch: {w.n} vs {h.n}")
    members = w.members()
    rows = h.rows & w.mask
    counts = _similarity_degrees_masked(rows, members, h.n, k, threads)
    return members, counts


def max_similarity_degree_vertex(h: Graph, w: VertexSet, k: int, threads: int | None = None) -> int:
    """Member of w with the largest similarity degree; ties go to the
    smallest vertex id."""
    members, counts = similarity_degrees(h, w, k, threads)
    if members.size == 0:
        raise ValueError("queried set is empty")
    return int(members[int(np.argmax(counts))])


def _similarity_degrees_masked(rows: np.ndarray, members: np.ndarray, n: int, k: int,
                               threads: int | None = None) -> np.ndarray:
    """Core engine: rows must already be masked to the member universe."""
    m = members.size
    counts = np.zeros(m, dtype=np.int64)
    if m <= 1:
        return counts
    pos = np.full(n, -1, dtype=np.int64)
    pos[members] = np.arange(m)

    degs = bitset.row_popcounts(rows[members])
    ordered = members[np.lexsort((members, degs))]

    # greedy grouping by closeness to a seed row
    cap = max(k, 64)
    group_of = np.full(n, -1, dtype=np.int64)
    group_members: list[np.ndarray] = []
    unassigned = ordered
    while unassigned.size:
        r = int(unassigned[0])
        gi = len(group_members)
        dist = np.empty(unassigned.size, dtype=np.int64)

        def seed_pass(lo: int, hi: int) -> None:
            x = rows[unassigned[lo:hi]] ^ rows[r]
            dist[lo:hi] = np.bitwise_count(x).sum(axis=1, dtype=np.int64)

        run_blocked(seed_pass, unassigned.size, threads)
        take = dist <= cap
        group_of[unassigned[take]] = gi
        group_members.append(np.sort(unassigned[take]))
        unassigned = unassigned[~take]

    # per-group reference mask: the bitwise majority of the group's rows.
    # Any mask is sound here; the majority keeps each vertex's diff list
    # local to that vertex, so diff lists rarely share elements.
    nref = len(group_members)
    masks = np.empty((nref, rows.shape[1]), dtype=np.uint64)
    for gi, mem in enumerate(group_members):
        acc = np.zeros(n, dtype=np.int64)
        for lo in range(0, mem.size, 2048):
            block = mem[lo : lo + 2048]
            acc += np.unpackbits(
                rows[block].view(np.uint8), axis=1, bitorder="little"
            )[:, :n].sum(axis=0, dtype=np.int64)
        masks[gi] = bitset.pack((2 * acc > mem.size).astype(np.uint8))

    s_list: list[np.ndarray] = [np.empty(0, dtype=np.int64)] * m
    group_max_s: list[int] = []
    for gi, mem in enumerate(group_members):
        mx = 0
        for v in mem.tolist():
            ids = bitset.to_indices(rows[v] ^ masks[gi], n)
            ids = ids[ids != v]
            s_list[int(pos[v])] = ids
            if ids.size > mx:
                mx = ids.size
        group_max_s.append(mx)
    s_sizes = np.fromiter((s.size for s in s_list), dtype=np.int64, count=m)
    is_member = np.zeros(n, dtype=bool)
    is_member[members] = True

    # pairs where the additive baseline can be wrong: shared diff elements
    # or one vertex occurring in the other's diff
    pair_set: set[tuple[int, int]] = set()
    if int(s_sizes.sum()):
        owners = np.repeat(members, s_sizes)
        elems = np.concatenate([s for s in s_list if s.size])
        for v, x in zip(owners.tolist(), elems.tolist()):
            if is_member[x] and x != v:
                pair_set.add((v, x) if v < x else (x, v))
        order = np.argsort(elems, kind="stable")
        se, so = elems[order], owners[order]
        starts = np.flatnonzero(np.diff(se, prepend=se[0] - 1, append=se[-1] + 1))
        for a, b in zip(starts[:-1].tolist(), starts[1:].tolist()):
            if b - a >= 2:
                run = so[a:b].tolist()
                for i in range(len(run)):
                    for j in range(i + 1, len(run)):
                        u, v = run[i], run[j]
                        if u != v:
                            pair_set.add((u, v) if u < v else (v, u))
    buckets: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for u, v in pair_set:
        ga, gb = int(group_of[u]), int(group_of[v])
        if ga <= gb:
            buckets.setdefault((ga, gb), []).append((u, v))
        else:
            buckets.setdefault((gb, ga), []).append((v, u))

    for a in range(nref):
        mem_a = group_members[a]
        for b in range(a, nref):
            mem_b = group_members[b]
            xor_ab = masks[a] ^ masks[b]
            base = bitset.popcount(xor_ab)
            if base > k + group_max_s[a] + group_max_s[b] + 2:
                continue  # no pair of these groups can be k-similar
            dbool = bitset.unpack(xor_ab, n).astype(bool)

            def cvals(mem: np.ndarray) -> np.ndarray:
                out = np.empty(mem.size, dtype=np.int64)
                for i, v in enumerate(mem.tolist()):
                    s = s_list[int(pos[v])]
                    out[i] = s.size - 2 * int(dbool[s].sum()) - int(dbool[v])
                return out

            c_a = cvals(mem_a)
            c_b = c_a if b == a else cvals(mem_b)
            sorted_b = np.sort(c_b)
            counts[pos[mem_a]] += np.searchsorted(sorted_b, k - base - c_a, side="right")
            if b == a:
                counts[pos[mem_a]] -= (2 * c_a + base <= k).astype(np.int64)
            else:
                sorted_a = np.sort(c_a)
                counts[pos[mem_b]] += np.searchsorted(sorted_a, k - base - c_b, side="right")

            slot_a = {int(v): i for i, v in enumerate(mem_a.tolist())}
            slot_b = slot_a if b == a else {int(v): i for i, v in enumerate(mem_b.tolist())}
            for u, v in buckets.get((a, b), ()):
                predicted = base + int(c_a[slot_a[u]]) + int(c_b[slot_b[v]]) <= k
                exact = _masked_pair_distance(rows, u, v) <= k
                if predicted != exact:
                    delta = 1 if exact else -1
                    counts[pos[u]] += delta
                    counts[pos[v]] += delta
    return counts


def u_perfect_set(pg: PartitionedGraph, u: int) -> VertexSet:
    """Union of the parts of u's pattern-neighbors; contains the part of u
    itself exactly when u has a loop."""
    if not 0 <= u < pg.pattern.nodes:
        raise KeyError(f"no node {u} in pattern with {pg.pattern.nodes} nodes")
    mask = bitset.zeros(pg.graph.n)
    parts = pg.part_masks()
    for v in pg.pattern.neighbor_nodes(u):
        mask |= parts[v]
    return VertexSet(pg.graph.n, mask)


@dataclass(frozen=True)
class PerfectnessReport:
    vertex: int
    best_node: int
    distance: int
    per_node: tuple[int, ...]


def perfect_set_masks(pg: PartitionedGraph) -> np.ndarray:
    """(K, words) matrix of the per-node perfect sets."""
    k = pg.pattern.nodes
    masks = np.zeros((k, bitset.word_count(pg.graph.n)), dtype=np.uint64)
    parts = pg.part_masks()
    for u in range(k):
        for v in pg.pattern.neighbor_nodes(u):
            masks[u] |= parts[v]
    return masks


def perfectness_distances(pg: PartitionedGraph, h: Graph, threads: int | None = None) -> np.ndarray:
    """(n, K) matrix of |N_h(v) triangle perfect(u)|, v's own bit excluded.

    A vertex can never be its own neighbor, so its bit is dropped from the
    perfect set before comparing.
    """
    if h.n != pg.graph.n:
        raise ValueError(f"vertex count mismatch: {h.n} vs {pg.graph.n}")
    n, k = h.n, pg.pattern.nodes
    masks = perfect_set_masks(pg)
    out = np.empty((n, k), dtype=np.int64)

    def work(lo: int, hi: int) -> None:
        for u in range(k):
            xor = h.rows[lo:hi] ^ masks[u]
            d = np.bitwise_count(xor).sum(axis=1, dtype=np.int64)
            d -= bitset.unpack(masks[u], n)[lo:hi]
            out[lo:hi, u] = d

    run_blocked(work, n, threads)
    return out


def perfectness(pg: PartitionedGraph, h: Graph, v: int) -> PerfectnessReport:
    """Best node for v (minimum masked distance to a perfect set)."""
    if h.n != pg.graph.n:
        raise ValueError(f"vertex count mismatch: {h.n} vs {pg.graph.n}")
    masks = perfect_set_masks(pg)
    dists = []
    for u in range(pg.pattern.nodes):
        xor = h.row(v) ^ masks[u]
        dists.append(bitset.popcount(xor) - int(bitset.get_bit(xor, v)))
    best = int(np.argmin(dists))
    return PerfectnessReport(v, best, int(dists[best]), tuple(int(x) for x in dists))


# --- structural-law checkers -------------------------------------------------


@dataclass(frozen=True)
class PartPerfectionRow:
    node: int
    size: int
    eligible: bool
    perfect_count: int
    passed: bool


@dataclass(frozen=True)
class PartPerfectionReport:
    d: int
    nodes: int
    max_part: int
    distance_bound: int
    rows: tuple[PartPerfectionRow, ...]
    passed: bool


def check_part_perfect_fraction(pg: PartitionedGraph, d: int, h: Graph | None = None,
                                threads: int | None = None) -> PartPerfectionReport:
    """Every part holding at least max-part/(4K) vertices must have at
    least a (1 - 1/(10K)) fraction of vertices within 80dK^3 of its own
    perfect set.  Exact integer counting, no tolerance."""
    if h is None:
        h = apply_pattern(pg)
    k = pg.pattern.nodes
    sizes = pg.part_sizes()
    m_max = int(sizes.max()) if k else 0
    bound = 80 * d * k**3
    dists = perfectness_distances(pg, h, threads)
    rows = []
    ok_all = True
    for u in range(k):
        size = int(sizes[u])
        eligible = 4 * k * size >= m_max
        within = int(((pg.assignment == u) & (dists[:, u] <= bound)).sum())
        passed = (not eligible) or (10 * k * within >= (10 * k - 1) * size)
        ok_all = ok_all and passed
        rows.append(PartPerfectionRow(u, size, eligible, within, passed))
    return PartPerfectionReport(d, k, m_max, bound, tuple(rows), ok_all)


@dataclass(frozen=True)
class SimilarClusterReport:
    similar_total: int
    best_node: int
    best_count: int
    outside: int
    outside_bound: int
    passed: bool


def check_similar_vertices_single_part(pg: PartitionedGraph, target: VertexSet, d: int,
                                       h: Graph | None = None) -> SimilarClusterReport:
    """All but at most 330dK^4 of the vertices whose neighborhoods are
    (160dK^3)-similar to the target set must lie in one part.  Requires
    every part to hold at least 330dK^3 vertices."""
    k = pg.pattern.nodes
    min_part = 330 * d * k**3
    sizes = pg.part_sizes()
    if k and int(sizes.min()) < min_part:
        raise PreconditionError(
            f"every part must have at least 330*d*K^3 = {min_part} vertices; "
            f"smallest has {int(sizes.min())}"
        )
    if h is None:
        h = apply_pattern(pg)
    if target.n != h.n:
        raise ValueError(f"universe mismatch: {target.n} vs {h.n}")
    sim_thr = 160 * d * k**3
    dist = bitset.row_popcounts(h.rows ^ target.mask)
    similar = dist <= sim_thr
    per_node = np.bincount(pg.assignment[similar], minlength=k).astype(np.int64)
    best = int(np.argmax(per_node)) if k else 0
    total = int(similar.sum())
    outside = total - int(per_node[best]) if k else 0
    bound = 330 * d * k**4
    return SimilarClusterReport(total, best, int(per_node[best]) if k else 0,
                                outside, bound, outside <= bound)


@dataclass(frozen=True)
class MaxSimilarityPerfectionReport:
    vertex: int
    best_node: int
    distance: int
    distance_bound: int
    similarity_threshold: int
    passed: bool


def check_max_similarity_vertex_perfect(pg: PartitionedGraph, d: int, h: Graph | None = None,
                                        threads: int | None = None) -> MaxSimilarityPerfectionReport:
    """The maximum-degree vertex of the (160dK^3)-similarity graph must be
    within 570dK^4 of some node's perfect set.  Requires n >= 1100dK^5."""
    k = pg.pattern.nodes
    need = 1100 * d * k**5
    if pg.graph.n < need:
        raise PreconditionError(
            f"need at least 1100*d*K^5 = {need} vertices, got {pg.graph.n}"
        )
    if h is None:
        h = apply_pattern(pg)
    sim_thr = 160 * d * k**3
    v = max_similarity_degree_vertex(h, VertexSet.full(h.n), sim_thr, threads)
    rep = perfectness(pg, h, v)
    bound = 570 * d * k**4
    return MaxSimilarityPerfectionReport(v, rep.best_node, rep.distance, bound,
                                         sim_thr, rep.distance <= bound)
