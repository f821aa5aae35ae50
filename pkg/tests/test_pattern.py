import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphrecover import (
    Graph,
    PartitionedGraph,
    Pattern,
    SubsetList,
    VertexSet,
    apply_pattern,
    complement_on_subsets,
    first_forbidden_twins,
    graph_symmetric_difference,
    induced_subgraph,
    is_pattern,
    pattern_to_subsets,
    perfect_blowup,
    reduce_pattern,
    restrict_partitioned,
    subsets_to_pattern,
)

from helpers import (
    oracle_apply_pattern,
    oracle_complement_on_subsets,
    random_graph,
    random_partitioned,
    random_pattern_candidate,
)


LOOP1 = Pattern(1, loops=frozenset([0]))
PLAIN1 = Pattern(1)


def test_is_pattern_single_node():
    assert is_pattern(PLAIN1)
    assert is_pattern(LOOP1)


def test_is_pattern_edge_with_one_loop():
    assert is_pattern(Pattern(2, edges=frozenset([(0, 1)]), loops=frozenset([0])))


def test_is_pattern_rejects_isolated_loopless_pair():
    p = Pattern(2)
    assert not is_pattern(p)
    assert first_forbidden_twins(p) == (0, 1)


def test_is_pattern_rejects_adjacent_loopy_twins():
    p = Pattern(2, edges=frozenset([(0, 1)]), loops=frozenset([0, 1]))
    assert not is_pattern(p)


def test_apply_pattern_complement_of_path():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    pg = PartitionedGraph(g, LOOP1, [0, 0, 0])
    assert apply_pattern(pg) == Graph.from_edges(3, [(0, 2)])
    assert apply_pattern(pg) == g.complement()


def test_apply_pattern_identity():
    rng = random.Random(0)
    g = random_graph(rng, 8)
    pg = PartitionedGraph(g, PLAIN1, [0] * 8)
    assert apply_pattern(pg) == g


def test_apply_pattern_builds_triangle():
    pat = Pattern(2, edges=frozenset([(0, 1)]), loops=frozenset([0]))
    pg = PartitionedGraph(Graph.empty(3), pat, [0, 0, 1])
    assert apply_pattern(pg) == Graph.complete(3)


def test_apply_pattern_matches_pair_flip_oracle():
    rng = random.Random(1)
    for _ in range(60):
        pg = random_partitioned(rng, rng.randrange(0, 14), rng.randrange(1, 5))
        assert apply_pattern(pg) == oracle_apply_pattern(pg)


def test_apply_pattern_involution():
    rng = random.Random(2)
    for _ in range(100):
        pg = random_partitioned(rng, rng.randrange(0, 40), rng.randrange(1, 6))
        h = apply_pattern(pg)
        back = apply_pattern(PartitionedGraph(h, pg.pattern, pg.assignment))
        assert back == pg.graph


def test_perfect_blowup_is_apply_on_edgeless():
    rng = random.Random(3)
    for _ in range(20):
        pg = random_partitioned(rng, rng.randrange(1, 20), rng.randrange(1, 4))
        empty_pg = PartitionedGraph(Graph.empty(pg.graph.n), pg.pattern, pg.assignment)
        assert perfect_blowup(pg) == apply_pattern(empty_pg)


def test_reduce_pattern_noop_on_valid():
    rng = random.Random(4)
    pg = random_partitioned(rng, 12, 3)
    red = reduce_pattern(pg)
    assert red.pattern == pg.pattern
    assert red.graph == pg.graph
    assert np.array_equal(red.assignment, pg.assignment)


def test_reduce_pattern_merges_isolated_loopless_pair():
    g = Graph.from_edges(4, [(0, 3)])
    pg = PartitionedGraph(g, Pattern(2), [0, 0, 1, 1])
    red = reduce_pattern(pg)
    assert red.pattern == Pattern(1)
    assert red.assignment.tolist() == [0, 0, 0, 0]
    assert red.graph == g


def test_reduce_pattern_drops_nodes_and_their_vertices():
    pat = Pattern(2, edges=frozenset([(0, 1)]), loops=frozenset([0]))
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    pg = PartitionedGraph(g, pat, [0, 0, 1, 1])
    red = reduce_pattern(pg, removed_nodes={1})
    assert red.pattern == Pattern(1, loops=frozenset([0]))
    assert red.graph == Graph.from_edges(2, [(0, 1)])


def test_reduce_pattern_restrict_commutes():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randrange(0, 21)
        k = 4
        g = random_graph(rng, n)
        pat = random_pattern_candidate(rng, k)
        pg = PartitionedGraph(g, pat, [rng.randrange(k) for _ in range(n)])
        removed = set(rng.sample(range(k), rng.randrange(k)))
        red = reduce_pattern(pg, removed)
        assert is_pattern(red.pattern)
        keep = [v for v in range(n) if int(pg.assignment[v]) not in removed]
        w = VertexSet.from_indices(n, keep)
        restricted, _ = induced_subgraph(apply_pattern(pg), w)
        assert apply_pattern(red) == restricted


def test_reduce_pattern_merge_order_invariance():
    # scanning pairs in a different order may not change the canonical result
    rng = random.Random(6)

    def reduce_reversed(pg, removed):
        k = pg.pattern.nodes
        relabel = list(reversed(range(k)))
        inv = {orig: new for new, orig in enumerate(relabel)}
        edges = frozenset(
            (min(inv[u], inv[v]), max(inv[u], inv[v])) for u, v in pg.pattern.edges
        )
        loops = frozenset(inv[u] for u in pg.pattern.loops)
        flipped = PartitionedGraph(
            pg.graph,
            Pattern(k, edges, loops),
            np.array([inv[int(u)] for u in pg.assignment], dtype=np.int32),
        )
        red = reduce_pattern(flipped, {inv[u] for u in removed})
        return red

    for _ in range(120):
        n = rng.randrange(0, 15)
        k = rng.randrange(1, 5)
        g = random_graph(rng, n)
        pg = PartitionedGraph(
            g, random_pattern_candidate(rng, k), [rng.randrange(k) for _ in range(n)]
        )
        removed = set(rng.sample(range(k), rng.randrange(k)))
        a = reduce_pattern(pg, removed)
        b = reduce_reversed(pg, removed)
        # same transformation semantics regardless of merge order
        assert apply_pattern(a) == apply_pattern(b)
        assert a.pattern.nodes == b.pattern.nodes
        # parts agree as unlabeled partitions
        pa = [tuple(sorted(a.part(u))) for u in range(a.pattern.nodes)]
        pb = [tuple(sorted(b.part(u))) for u in range(b.pattern.nodes)]
        assert sorted(pa) == sorted(pb)


def random_subsets(rng: random.Random, n: int, k: int) -> SubsetList:
    sets = []
    for _ in range(k):
        members = [v for v in range(n) if rng.random() < 0.5]
        sets.append(VertexSet.from_indices(n, members))
    return SubsetList(n, sets)


def test_subsets_to_pattern_zero_subsets():
    g = Graph.from_edges(5, [(0, 1), (2, 3)])
    pg = subsets_to_pattern(g, SubsetList(5, []))
    assert pg.pattern == Pattern(1)
    assert apply_pattern(pg) == g


def test_subsets_to_pattern_full_subset_is_complement():
    rng = random.Random(7)
    g = random_graph(rng, 9)
    pg = subsets_to_pattern(g, SubsetList(9, [VertexSet.full(9)]))
    assert pg.pattern == Pattern(1, loops=frozenset([0]))
    assert apply_pattern(pg) == g.complement()


def test_subsets_to_pattern_matches_sequential_oracle():
    rng = random.Random(8)
    for _ in range(120):
        n = rng.randrange(0, 13)
        k = rng.randrange(0, 4)
        g = random_graph(rng, n)
        subs = random_subsets(rng, n, k)
        pg = subsets_to_pattern(g, subs)
        assert is_pattern(pg.pattern)
        assert pg.pattern.nodes <= 2**k
        assert apply_pattern(pg) == oracle_complement_on_subsets(g, subs)
        assert complement_on_subsets(g, subs) == oracle_complement_on_subsets(g, subs)


def test_pattern_to_subsets_trivial_cases():
    g = Graph.from_edges(4, [(0, 1)])
    none = pattern_to_subsets(PartitionedGraph(g, PLAIN1, [0] * 4))
    assert len(none) == 0
    full = pattern_to_subsets(PartitionedGraph(g, LOOP1, [0] * 4))
    assert len(full) == 1 and sorted(full.subsets[0]) == [0, 1, 2, 3]


def test_pattern_to_subsets_roundtrip_and_bound():
    rng = random.Random(9)
    for _ in range(120):
        n = rng.randrange(0, 13)
        k = rng.randrange(1, 4)
        pg = random_partitioned(rng, n, k)
        subs = pattern_to_subsets(pg)
        assert len(subs) <= k + k * (k - 1) // 2
        assert oracle_complement_on_subsets(pg.graph, subs) == apply_pattern(pg)


def test_subsets_pattern_subsets_roundtrip():
    rng = random.Random(10)
    for _ in range(60):
        n = rng.randrange(1, 13)
        k = rng.randrange(0, 4)
        g = random_graph(rng, n)
        subs = random_subsets(rng, n, k)
        pg = subsets_to_pattern(g, subs)
        again = pattern_to_subsets(pg)
        assert oracle_complement_on_subsets(g, again) == oracle_complement_on_subsets(g, subs)


def test_restrict_partitioned_keeps_pattern():
    rng = random.Random(11)
    pg = random_partitioned(rng, 15, 3)
    w = VertexSet.from_indices(15, range(0, 15, 2))
    sub, ids = restrict_partitioned(pg, w)
    assert sub.pattern == pg.pattern
    assert ids.tolist() == list(range(0, 15, 2))
    restricted, _ = induced_subgraph(apply_pattern(pg), w)
    assert apply_pattern(sub) == restricted


def test_blowup_to_pattern_reconstructs():
    rng = random.Random(12)
    from graphrecover import blowup_to_pattern

    for _ in range(40):
        pg = random_partitioned(rng, rng.randrange(0, 20), rng.randrange(1, 5))
        f = perfect_blowup(pg)
        back = blowup_to_pattern(f)
        assert is_pattern(back.pattern)
        assert perfect_blowup(back) == f


def test_blowup_to_pattern_node_count_is_twin_count():
    from graphrecover import blowup_to_pattern, twin_classes

    g = Graph.from_edges(6, [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)])
    back = blowup_to_pattern(g)
    assert back.pattern.nodes == len(twin_classes(g))
    assert perfect_blowup(back) == g


@given(st.integers(0, 2**30), st.integers(0, 25), st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_apply_pattern_involution_property(seed, n, k):
    rng = random.Random(seed)
    pg = random_partitioned(rng, n, k)
    h = apply_pattern(pg)
    assert apply_pattern(PartitionedGraph(h, pg.pattern, pg.assignment)) == pg.graph


def test_partitioned_graph_validates_assignment():
    g = Graph.empty(3)
    with pytest.raises(ValueError):
        PartitionedGraph(g, PLAIN1, [0, 1, 0])
    with pytest.raises(ValueError):
        PartitionedGraph(g, PLAIN1, [0, 0])


def test_part_lookup_errors_on_unknown_node():
    pg = PartitionedGraph(Graph.empty(3), PLAIN1, [0, 0, 0])
    with pytest.raises(KeyError):
        pg.part(1)
