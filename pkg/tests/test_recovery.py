import random

import numpy as np
import pytest

from graphrecover import (
    Graph,
    GraphBuilder,
    PartitionedGraph,
    Pattern,
    RecoveryConfig,
    apply_pattern,
    disagreement_vertices,
    gen_planted,
    graph_symmetric_difference,
    perfect_blowup,
    recover,
    recover_blowup,
    verify_against_truth,
)
from graphrecover.generators import PatternedInstance

from helpers import random_graph


def test_config_thresholds_exact():
    cfg = RecoveryConfig(d=2, K=3)
    assert cfg.size_floor == 1100 * 2 * 3**5
    assert cfg.similarity_threshold == 160 * 2 * 3**3
    assert cfg.match_threshold == 1140 * 2 * 3**4
    assert cfg.disagreement_bound == 4000 * 2 * 3**6
    with pytest.raises(ValueError):
        RecoveryConfig(d=0, K=1)


def test_below_threshold_no_iterations():
    rng = random.Random(0)
    h = random_graph(rng, 200)
    out = recover(h, RecoveryConfig(1, 1))
    assert out.below_threshold
    assert out.blowup == Graph.empty(200)
    assert out.recovered == h
    assert len(out.residual) == 200


def test_recovered_is_always_source_xor_blowup():
    rng = random.Random(1)
    for n in (100, 1150):
        h = random_graph(rng, n, 0.2)
        out = recover(h, RecoveryConfig(1, 1))
        assert graph_symmetric_difference(out.recovered, h) == out.blowup


def test_complement_of_empty_recovers_exactly_off_residual():
    # input = complete graph; the ideal blow-up is the complete graph too
    n = 1200
    empty = Graph.empty(n)
    pat = Pattern(1, loops=frozenset([0]))
    pg = PartitionedGraph(empty, pat, [0] * n)
    h = apply_pattern(pg)
    assert h == Graph.complete(n)
    out = recover(h, RecoveryConfig(1, 1))
    ideal = perfect_blowup(pg)
    diff = disagreement_vertices(out.blowup, ideal)
    assert diff == out.residual  # perfect agreement outside the leftover set
    assert len(out.discovered) == 1
    assert out.recovered is not None


def test_planted_complement_forest():
    inst = gen_planted(1200, 1, 1, seed=5)
    pat = inst.pg.pattern
    if not pat.has_loop(0):  # force the complement variant
        pg = PartitionedGraph(inst.graph, Pattern(1, loops=frozenset([0])),
                              inst.pg.assignment)
        inst = PatternedInstance(inst.graph, pg, apply_pattern(pg), 5, 1, 1)
    cfg = RecoveryConfig(1, 1)
    out = recover(inst.applied, cfg, threads=1)
    rep = verify_against_truth(out, inst)
    assert rep.input_matches_truth
    assert rep.within_bound  # vacuous at n=1200 but must hold
    assert rep.recovered_matches
    assert rep.count_within_nodes and rep.discovered_count == 1
    assert rep.sets_all_perfect
    # almost everything outside the residual was recovered exactly
    assert rep.disagreement_count <= len(out.residual) + 40


def test_recovery_deterministic():
    inst = gen_planted(1300, 1, 1, seed=9)
    cfg = RecoveryConfig(1, 1)
    a = recover(inst.applied, cfg, threads=1)
    b = recover(inst.applied, cfg, threads=3)
    assert a.blowup == b.blowup
    assert a.recovered == b.recovered
    assert [r.vertex for r in a.removals] == [r.vertex for r in b.removals]
    assert [d.vertex for d in a.discovered] == [d.vertex for d in b.discovered]
    assert a.residual == b.residual


def test_discovered_set_members_snapshot():
    inst = gen_planted(1150, 1, 1, seed=3)
    out = recover_blowup(inst.applied, RecoveryConfig(1, 1))
    for disc in out.discovered:
        assert disc.w_size >= RecoveryConfig(1, 1).size_floor
        # the recorded set is the chosen vertex's neighborhood in h[W] at
        # discovery: no removals had happened yet for the first set
        if disc.w_size == inst.applied.n:
            nbrs = set(int(x) for x in inst.applied.neighbors(disc.vertex))
            assert set(disc.members) == nbrs


def test_removal_log_monotone_w():
    inst = gen_planted(1400, 1, 1, seed=4)
    out = recover_blowup(inst.applied, RecoveryConfig(1, 1))
    sizes = [r.w_size for r in out.removals]
    assert sizes == sorted(sizes, reverse=True)
    assert len(set(r.vertex for r in out.removals)) == len(out.removals)


def test_verify_rejects_wrong_size():
    inst = gen_planted(1150, 1, 1, seed=6)
    out = recover(inst.applied, RecoveryConfig(1, 1))
    other = gen_planted(900, 1, 1, seed=6)
    with pytest.raises(ValueError):
        verify_against_truth(out, other)


def test_verify_reports_on_corrupted_input():
    inst = gen_planted(1150, 1, 1, seed=7)
    b = GraphBuilder(inst.applied.n)
    b.rows[:] = inst.applied.rows
    b.toggle_edge(17, 331)
    corrupted = b.build()
    out = recover(corrupted, RecoveryConfig(1, 1))
    rep = verify_against_truth(out, inst, check_discovered=False)
    assert not rep.input_matches_truth
    assert isinstance(rep.disagreement_count, int)  # full report, no raise


def test_empty_pattern_instance_verifies_trivially():
    # identity pattern at small n: below threshold, blow-up stays empty,
    # which matches the ideal blow-up of a loopless isolated node exactly
    g = Graph.empty(50)
    pg = PartitionedGraph(g, Pattern(1), [0] * 50)
    inst = PatternedInstance(g, pg, apply_pattern(pg), 0, 1, 1)
    out = recover(inst.applied, RecoveryConfig(1, 1))
    rep = verify_against_truth(out, inst)
    assert rep.disagreement_count == 0
    assert rep.passed


def test_two_part_planted_consistency():
    inst = gen_planted(2500, 1, 2, seed=8)
    cfg = RecoveryConfig(1, 2)  # floor is 35200: below threshold here
    out = recover(inst.applied, cfg)
    assert out.below_threshold
    rep = verify_against_truth(out, inst)
    assert rep.recovered_matches and rep.count_within_nodes


def test_identity_pattern_recovery_stays_consistent():
    # loopless single node: the input IS the original graph; bounds are
    # vacuous at this size but the structural identities must hold
    inst = gen_planted(1250, 1, 1, seed=21)
    pg = PartitionedGraph(inst.graph, Pattern(1), inst.pg.assignment)
    inst = PatternedInstance(inst.graph, pg, apply_pattern(pg), 21, 1, 1)
    assert inst.applied == inst.graph
    out = recover(inst.applied, RecoveryConfig(1, 1))
    rep = verify_against_truth(out, inst)
    assert rep.recovered_matches
    assert rep.count_within_nodes
    assert rep.within_bound  # 4000 >= n
    assert rep.sets_all_perfect


def test_discovered_sets_obey_single_part_capture():
    # every set the loop records should concentrate its similar vertices
    # in one part when all parts are large enough
    from graphrecover import check_similar_vertices_single_part

    inst = gen_planted(1200, 1, 1, seed=33)
    if not inst.pg.pattern.has_loop(0):
        pg = PartitionedGraph(inst.graph, Pattern(1, loops=frozenset([0])),
                              inst.pg.assignment)
        inst = PatternedInstance(inst.graph, pg, apply_pattern(pg), 33, 1, 1)
    out = recover_blowup(inst.applied, RecoveryConfig(1, 1))
    assert out.discovered
    for disc in out.discovered:
        rep = check_similar_vertices_single_part(inst.pg, disc.members, d=1,
                                                 h=inst.applied)
        assert rep.passed
