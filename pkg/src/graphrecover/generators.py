"""Reproducible instance generators.

All randomness comes from a fixed, fully specified 64-bit generator
(xoshiro256** seeded through splitmix64, see Rng below) so that the same
seed produces byte-identical instances on any platform or implementation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph, GraphBuilder
from .pattern import PartitionedGraph, Pattern, apply_pattern, is_pattern

_MASK = (1 << 64) - 1


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Rng:
    """xoshiro256** with splitmix64 seeding.

    State is four 64-bit words produced by successive splitmix64 outputs
    of the seed.  next_u64 returns rotl(s1 * 5, 7) * 9 and advances the
    state with the standard xoshiro256** transition (t = s1 << 17;
    s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)).
    below(b) is next_u64() % b.
    """

    __slots__ = ("s",)

    def __init__(self, seed: int):
        state = seed & _MASK
        s = []
        for _ in range(4):
            state, out = _splitmix64(state)
            s.append(out)
        self.s = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def coin(self) -> bool:
        return bool(self.next_u64() & 1)


@dataclass(frozen=True)
class PatternedInstance:
    """Ground-truth bundle: graph, its pattern/partition, and the result."""

    graph: Graph
    pg: PartitionedGraph
    applied: Graph
    seed: int
    d: int
    K: int


def _degenerate_into(rng: Rng, n: int, d: int) -> Graph:
    b = GraphBuilder(n)
    for i in range(1, n):
        cmax = min(d, i)
        c = rng.below(cmax + 1) if cmax else 0
        chosen: set[int] = set()
        while len(chosen) < c:
            x = rng.below(i)  # resample duplicates; order is part of the spec
            if x not in chosen:
                chosen.add(x)
                b.add_edge(i, x)
    return b.build()


def gen_degenerate(n: int, d: int, seed: int) -> Graph:
    """Random d-degenerate graph: vertex i picks a uniform count in
    0..min(d, i) of distinct uniform earlier neighbors."""
    if n < 0 or d < 0:
        raise ValueError("n and d must be nonnegative")
    return _degenerate_into(Rng(seed), n, d)


_PATTERN_ATTEMPTS = 1000


def _random_pattern(rng: Rng, k: int) -> Pattern:
    for _ in range(_PATTERN_ATTEMPTS):
        edges = frozenset(
            (u, v) for u in range(k) for v in range(u + 1, k) if rng.coin()
        )
        loops = frozenset(u for u in range(k) if rng.coin())
        cand = Pattern(k, edges, loops)
        if is_pattern(cand):
            return cand
    # deterministic fallback: a path with loops on even-index nodes
    edges = frozenset((u, u + 1) for u in range(k - 1))
    loops = frozenset(u for u in range(0, k, 2))
    return Pattern(k, edges, loops)


def gen_planted(n: int, d: int, K: int, seed: int, skew: int = 1) -> PatternedInstance:
    """Planted recovery instance: random d-degenerate graph, random valid
    K-node pattern, random assignment, plus the applied result.

    The stream order is fixed: graph edges first, then the pattern, then
    one draw per vertex for the assignment.  skew > 1 makes part u carry
    weight skew**u, producing small parts that stress the part-size
    thresholds of the checkers.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    if skew < 1:
        raise ValueError("skew must be at least 1")
    rng = Rng(seed)
    g = _degenerate_into(rng, n, d)
    pat = _random_pattern(rng, K)
    weights = [skew**u for u in range(K)]
    total = sum(weights)
    cum = np.cumsum(weights).tolist()
    assignment = np.empty(n, dtype=np.int32)
    for v in range(n):
        r = rng.below(total)
        for u in range(K):
            if r < cum[u]:
                assignment[v] = u
                break
    pg = PartitionedGraph(g, pat, assignment)
    return PatternedInstance(g, pg, apply_pattern(pg), seed, d, K)


def gen_multicolored_reduction(g: Graph, parts: Sequence[Sequence[int]], seed: int = 0) -> PatternedInstance:
    """Hardness-reduction instance from a k-partite graph, k >= 4.

    The graph is subdivided (one new vertex per edge, so the result is
    2-degenerate) and repartitioned into k parts plus one part per part
    pair, holding that pair's subdivision vertices.  The loopless pattern
    joins every node pair except a pair part and its two endpoint parts.
    The applied graph then has a clique on one vertex per part exactly
    when the input has a clique picking one vertex per input part.
    """
    k = len(parts)
    if k < 4:
        raise ValueError(f"reduction requires at least 4 parts, got {k}")
    part_of = np.full(g.n, -1, dtype=np.int64)
    for i, p in enumerate(parts):
        for v in p:
            if part_of[v] != -1:
                raise ValueError(f"vertex {v} listed in two parts")
            part_of[v] = i
    if np.any(part_of < 0):
        raise ValueError("parts must cover every vertex")
    edges = sorted(g.edges())
    for u, v in edges:
        if part_of[u] == part_of[v]:
            raise ValueError(f"edge ({u},{v}) inside part {int(part_of[u])}: input is not k-partite")

    pair_index = {}
    for i in range(k):
        for j in range(i + 1, k):
            pair_index[(i, j)] = k + len(pair_index)
    nodes = k + len(pair_index)

    n_sub = g.n + len(edges)
    b = GraphBuilder(n_sub)
    assignment = np.empty(n_sub, dtype=np.int32)
    assignment[: g.n] = part_of
    for t, (u, v) in enumerate(edges):
        x = g.n + t
        b.add_edge(u, x)
        b.add_edge(v, x)
        i, j = sorted((int(part_of[u]), int(part_of[v])))
        assignment[x] = pair_index[(i, j)]

    non_edges = set()
    for (i, j), idx in pair_index.items():
        non_edges.add((min(i, idx), max(i, idx)))
        non_edges.add((min(j, idx), max(j, idx)))
    pat_edges = frozenset(
        (a, bnode)
        for a in range(nodes)
        for bnode in range(a + 1, nodes)
        if (a, bnode) not in non_edges
    )
    pat = Pattern(nodes, pat_edges, frozenset())
    sub = b.build()
    pg = PartitionedGraph(sub, pat, assignment)
    return PatternedInstance(sub, pg, apply_pattern(pg), seed, 2, nodes)
