"""Shared test utilities: small random instances and definitional oracles.

Oracles here are deliberately naive (element loops, subset enumeration)
and independent of the packed-row implementations they check.
"""

from __future__ import annotations

import random
from itertools import combinations

import numpy as np

from graphrecover import Graph, GraphBuilder, Pattern, PartitionedGraph, VertexSet
from graphrecover.pattern import is_pattern


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    b = GraphBuilder(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                b.add_edge(u, v)
    return b.build()


def random_pattern_candidate(rng: random.Random, k: int) -> Pattern:
    edges = frozenset((u, v) for u in range(k) for v in range(u + 1, k) if rng.random() < 0.5)
    loops = frozenset(u for u in range(k) if rng.random() < 0.5)
    return Pattern(k, edges, loops)


def random_valid_pattern(rng: random.Random, k: int) -> Pattern:
    while True:
        p = random_pattern_candidate(rng, k)
        if is_pattern(p):
            return p


def random_partitioned(rng: random.Random, n: int, k: int, p: float = 0.3) -> PartitionedGraph:
    g = random_graph(rng, n, p)
    pat = random_valid_pattern(rng, k)
    assignment = [rng.randrange(k) for _ in range(n)]
    return PartitionedGraph(g, pat, assignment)


def graph_from_pair_flags(n: int, flag) -> Graph:
    b = GraphBuilder(n)
    for u in range(n):
        for v in range(u + 1, n):
            if flag(u, v):
                b.add_edge(u, v)
    return b.build()


def edges_set(g: Graph) -> set[tuple[int, int]]:
    return set(g.edges())


def oracle_apply_pattern(pg: PartitionedGraph) -> Graph:
    """Per-pair flip table evaluated directly from the definition."""
    a = pg.assignment

    def flag(u, v):
        flip = pg.pattern.adjacent(int(a[u]), int(a[v]))
        return pg.graph.has_edge(u, v) != flip

    return graph_from_pair_flags(pg.graph.n, flag)


def oracle_complement_on_subsets(g: Graph, subsets) -> Graph:
    """Sequential inside-subset complementation, one pair at a time."""
    members = [set(s.members().tolist()) for s in subsets]

    def flag(u, v):
        e = g.has_edge(u, v)
        for s in members:
            if u in s and v in s:
                e = not e
        return e

    return graph_from_pair_flags(g.n, flag)


def oracle_degeneracy(g: Graph) -> int:
    """Minimum over all vertex orderings of the maximum back-degree.

    Exhaustive search over orderings, memoized on the prefix set (the
    minimum over permutations only depends on the set already placed).
    """
    n = g.n
    if n == 0:
        return 0
    nbr = [0] * n
    for u in range(n):
        for v in g.neighbors(u):
            nbr[u] |= 1 << int(v)
    best = {0: 0}
    for size in range(1, n + 1):
        nxt: dict[int, int] = {}
        for s, val in best.items():
            for v in range(n):
                bit = 1 << v
                if s & bit:
                    continue
                back = bin(nbr[v] & s).count("1")
                t = s | bit
                cand = max(val, back)
                if t not in nxt or cand < nxt[t]:
                    nxt[t] = cand
        best = nxt
    return best[(1 << n) - 1]


def oracle_twin_classes(g: Graph) -> list[list[int]]:
    """Pairwise definition check with transitive closure."""
    n = g.n
    twins = [[False] * n for _ in range(n)]
    for u in range(n):
        twins[u][u] = True
        for v in range(u + 1, n):
            ok = all(
                g.has_edge(u, w) == g.has_edge(v, w)
                for w in range(n)
                if w != u and w != v
            )
            twins[u][v] = twins[v][u] = ok
    seen = [False] * n
    classes = []
    for u in range(n):
        if seen[u]:
            continue
        cls = [v for v in range(n) if twins[u][v]]
        for v in cls:
            seen[v] = True
        classes.append(cls)
    return classes


def oracle_masked_similarity(g: Graph, members: list[int], u: int, v: int) -> int:
    """|N(u) triangle N(v)| within the given universe, bits u and v excluded."""
    count = 0
    for w in members:
        if w == u or w == v:
            continue
        if g.has_edge(u, w) != g.has_edge(v, w):
            count += 1
    return count


def brute_force_max_clique_sizes(g: Graph) -> int:
    """Maximum clique size by exhaustive subset search (n <= ~20)."""
    n = g.n
    rows = [0] * n
    for u in range(n):
        for v in g.neighbors(u):
            rows[u] |= 1 << int(v)
    best = 0
    is_clique = {0: True}
    order = sorted(range(n))
    # DP over subsets: a set is a clique iff set minus lowest bit is a
    # clique and the lowest-bit vertex is adjacent to the rest.
    for s in range(1, 1 << n):
        low = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        ok = is_clique[rest] and (rows[low] & rest) == rest
        is_clique[s] = ok
        if ok:
            best = max(best, bin(s).count("1"))
    _ = order
    return best


def has_k_clique_brute(g: Graph, k: int) -> bool:
    if k == 0:
        return True
    if k > g.n:
        return False
    for sub in combinations(range(g.n), k):
        if all(g.has_edge(u, v) for u, v in combinations(sub, 2)):
            return True
    return False
