"""Command-line workbench: generate, apply, recover, verify, check, query.

Reports print a short human-readable section followed by key=value lines
for scripting.  Exit codes: 0 success/pass, 2 a checked bound failed,
3 a checker precondition is unmet, 4 parse error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .cliques import CliqueQuery, find_clique
from .generators import Rng, gen_planted
from .graph import Graph, VertexSet, degeneracy, graph_symmetric_difference
from .pattern import PartitionedGraph, apply_pattern, blowup_to_pattern
from .recovery import RecoveryConfig, recover, verify_against_truth
from .similarity import (
    PreconditionError,
    check_max_similarity_vertex_perfect,
    check_part_perfect_fraction,
    check_similar_vertices_single_part,
    similarity_degrees,
)

EXIT_OK = 0
EXIT_BOUND = 2
EXIT_PRECONDITION = 3
EXIT_PARSE = 4


def _kv(key, value) -> None:
    print(f"{key}={value}")


def _instance_d(args, graph: Graph) -> int:
    if getattr(args, "d", None) is not None:
        return args.d
    return max(1, degeneracy(graph)[0])


def cmd_gen(args) -> int:
    inst = gen_planted(args.n, args.d, args.K, args.seed, skew=args.skew)
    io.write_instance(args.out, inst.graph, inst.pg, inst.applied)
    sizes = inst.pg.part_sizes().tolist()
    d_actual = degeneracy(inst.graph)[0]
    print(f"wrote {args.out}{{{io.GRAPH_SUFFIX},{io.PATTERN_SUFFIX},{io.PARTITION_SUFFIX},{io.APPLIED_SUFFIX}}}")
    print(f"graph: {inst.graph.n} vertices, {inst.graph.edge_count} edges "
          f"(degeneracy {d_actual}); pattern: {inst.pg.pattern.nodes} nodes")
    _kv("n", inst.graph.n)
    _kv("m_graph", inst.graph.edge_count)
    _kv("m_applied", inst.applied.edge_count)
    _kv("d", args.d)
    _kv("degeneracy", d_actual)
    _kv("K", inst.pg.pattern.nodes)
    _kv("seed", args.seed)
    _kv("part_sizes", ",".join(map(str, sizes)))
    return EXIT_OK


def cmd_apply(args) -> int:
    g = io.read_edge_list(args.graph)
    pat = io.read_pattern(args.pattern)
    assignment = io.read_partition(args.partition, n=g.n)
    pg = PartitionedGraph(g, pat, assignment)
    h = apply_pattern(pg)
    io.write_edge_list(args.out, h)
    print(f"applied pattern: {h.edge_count} edges on {h.n} vertices -> {args.out}")
    _kv("n", h.n)
    _kv("m_applied", h.edge_count)
    return EXIT_OK


def cmd_recover(args) -> int:
    h = io.read_edge_list(args.input)
    cfg = RecoveryConfig(args.d, args.K)
    outcome = recover(h, cfg, threads=args.threads)
    io.write_edge_list(args.out, outcome.recovered)
    if args.dump_blowup:
        io.write_edge_list(args.dump_blowup, outcome.blowup)
    if outcome.below_threshold:
        print(f"input below threshold ({h.n} < {cfg.size_floor}): output equals input")
    print(f"recovered graph written to {args.out}")
    _kv("n", h.n)
    _kv("size_floor", cfg.size_floor)
    _kv("below_threshold", int(outcome.below_threshold))
    _kv("discovered_sets", len(outcome.discovered))
    _kv("removals", len(outcome.removals))
    _kv("residual", len(outcome.residual))
    if not args.truth_prefix:
        return EXIT_OK
    pg, applied = io.read_instance(args.truth_prefix)
    from .generators import PatternedInstance

    truth = PatternedInstance(pg.graph, pg, applied, 0, args.d, args.K)
    rep = verify_against_truth(outcome, truth)
    _kv("input_matches_truth", int(rep.input_matches_truth))
    _kv("disagreement", rep.disagreement_count)
    _kv("bound", rep.bound)
    _kv("within_bound", int(rep.within_bound))
    _kv("recovered_matches", int(rep.recovered_matches))
    _kv("sets_within_K", int(rep.count_within_nodes))
    _kv("pass", int(rep.passed))
    return EXIT_OK if rep.passed else EXIT_BOUND


def cmd_verify(args) -> int:
    pg, applied = io.read_instance(args.truth_prefix)
    d = _instance_d(args, pg.graph)
    k = args.K if args.K is not None else max(1, pg.pattern.nodes)
    cfg = RecoveryConfig(d, k)
    outcome = recover(applied, cfg, threads=args.threads)
    from .generators import PatternedInstance

    truth = PatternedInstance(pg.graph, pg, applied, 0, d, k)
    rep = verify_against_truth(outcome, truth)
    print(f"recovery on {applied.n} vertices: {rep.disagreement_count} disagreeing "
          f"vertices (bound {rep.bound}), {rep.discovered_count} sets")
    _kv("n", applied.n)
    _kv("d", d)
    _kv("K", k)
    _kv("disagreement", rep.disagreement_count)
    _kv("bound", rep.bound)
    _kv("within_bound", int(rep.within_bound))
    _kv("recovered_matches", int(rep.recovered_matches))
    _kv("sets", rep.discovered_count)
    _kv("sets_within_K", int(rep.count_within_nodes))
    _kv("sets_all_perfect", int(rep.sets_all_perfect))
    _kv("pass", int(rep.passed))
    return EXIT_OK if rep.passed else EXIT_BOUND


def cmd_check_lemma(args) -> int:
    pg, applied = io.read_instance(args.prefix)
    d = _instance_d(args, pg.graph)
    _kv_header = f"instance {args.prefix}: n={pg.graph.n} K={pg.pattern.nodes} d={d}"
    print(_kv_header)
    if args.which == 1:
        rep = check_part_perfect_fraction(pg, d, h=applied, threads=args.threads)
        for row in rep.rows:
            status = "pass" if row.passed else "FAIL"
            gate = "" if row.eligible else " (below size gate, exempt)"
            print(f"  part {row.node}: size {row.size}, "
                  f"{row.perfect_count} within {rep.distance_bound}{gate}: {status}")
        _kv("which", 1)
        _kv("distance_bound", rep.distance_bound)
        _kv("max_part", rep.max_part)
        _kv("pass", int(rep.passed))
        return EXIT_OK if rep.passed else EXIT_BOUND
    if args.which == 2:
        rng = Rng(args.seed)
        failures = 0
        for i in range(args.samples):
            members = [v for v in range(pg.graph.n) if rng.coin()]
            target = VertexSet.from_indices(pg.graph.n, members)
            rep = check_similar_vertices_single_part(pg, target, d, h=applied)
            if not rep.passed:
                failures += 1
                print(f"  sample {i}: FAIL ({rep.outside} outside best part, bound {rep.outside_bound})")
        print(f"  {args.samples - failures}/{args.samples} samples pass")
        _kv("which", 2)
        _kv("samples", args.samples)
        _kv("failures", failures)
        _kv("pass", int(failures == 0))
        return EXIT_OK if failures == 0 else EXIT_BOUND
    rep = check_max_similarity_vertex_perfect(pg, d, h=applied, threads=args.threads)
    print(f"  max-similarity vertex {rep.vertex}: distance {rep.distance} "
          f"to node {rep.best_node} (bound {rep.distance_bound})")
    _kv("which", 3)
    _kv("vertex", rep.vertex)
    _kv("distance", rep.distance)
    _kv("distance_bound", rep.distance_bound)
    _kv("pass", int(rep.passed))
    return EXIT_OK if rep.passed else EXIT_BOUND


def cmd_clique(args) -> int:
    if args.prefix:
        pg, applied = io.read_instance(args.prefix)
        d = _instance_d(args, pg.graph)
    else:
        h = io.read_edge_list(args.graph)
        if args.d is None or args.K is None:
            raise ParseHint("--graph mode requires --d and --K")
        cfg = RecoveryConfig(args.d, args.K)
        outcome = recover(h, cfg, threads=args.threads)
        shape = blowup_to_pattern(outcome.blowup)
        pg = PartitionedGraph(outcome.recovered, shape.pattern, shape.assignment)
        d = max(1, degeneracy(outcome.recovered)[0])
        print(f"witness from recovery: {shape.pattern.nodes} parts, "
              f"recovered graph degeneracy {d}")
    got = find_clique(CliqueQuery(args.k, pg, d), threads=args.threads)
    if got is None:
        print("none")
        _kv("k", args.k)
        _kv("found", 0)
    else:
        print("clique: " + " ".join(str(v) for v in sorted(got)))
        _kv("k", args.k)
        _kv("found", 1)
    return EXIT_OK


def cmd_similarity_stats(args) -> int:
    g = io.read_edge_list(args.graph)
    members, counts = similarity_degrees(g, VertexSet.full(g.n), args.k, threads=args.threads)
    if members.size == 0:
        print("empty graph")
        _kv("n", 0)
        return EXIT_OK
    best = int(np.argmax(counts))
    print(f"similarity degrees at threshold {args.k}: "
          f"max {int(counts[best])} at vertex {int(members[best])}")
    _kv("n", g.n)
    _kv("k", args.k)
    _kv("min_degree", int(counts.min()))
    _kv("max_degree", int(counts.max()))
    _kv("mean_degree", f"{counts.mean():.3f}")
    _kv("argmax_vertex", int(members[best]))
    return EXIT_OK


def cmd_degeneracy(args) -> int:
    g = io.read_edge_list(args.graph)
    d, order = degeneracy(g)
    print(f"{g.n} vertices, {g.edge_count} edges: degeneracy {d}")
    _kv("n", g.n)
    _kv("m", g.edge_count)
    _kv("degeneracy", d)
    _kv("max_degree", int(g.degrees().max()) if g.n else 0)
    _kv("peel_head", ",".join(map(str, order[:8])))
    return EXIT_OK


class ParseHint(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="graphrecover",
        description="pattern complementation on degenerate graphs: apply, recover, verify",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap (default: GRAPHRECOVER_THREADS or all cores)")

    p = sub.add_parser("gen", help="generate a planted instance (four files)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--skew", type=int, default=1, help="part-size skew base (1 = uniform)")
    p.add_argument("--out", required=True, help="output file prefix")
    common(p)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("apply", help="apply a pattern file to a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(fn=cmd_apply)

    p = sub.add_parser("recover", help="recover a graph from a complemented input")
    p.add_argument("--input", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--truth-prefix", default=None)
    p.add_argument("--dump-blowup", default=None)
    common(p)
    p.set_defaults(fn=cmd_recover)

    p = sub.add_parser("verify", help="recover from an instance's applied graph and check bounds")
    p.add_argument("--truth-prefix", required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--K", type=int, default=None)
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("check-lemma", help="run a structural-law checker on an instance")
    p.add_argument("--prefix", required=True)
    p.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--samples", type=int, default=100, help="random sets for checker 2")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(fn=cmd_check_lemma)

    p = sub.add_parser("clique", help="find a k-clique of the applied graph")
    p.add_argument("--prefix", default=None, help="instance prefix (witness mode)")
    p.add_argument("--graph", default=None, help="applied graph only; recover a witness first")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--K", type=int, default=None)
    common(p)
    p.set_defaults(fn=cmd_clique)

    p = sub.add_parser("similarity-stats", help="similarity-degree summary of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_similarity_stats)

    p = sub.add_parser("degeneracy", help="degeneracy of a graph file")
    p.add_argument("--graph", required=True)
    common(p)
    p.set_defaults(fn=cmd_degeneracy)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "clique" and not args.prefix and not args.graph:
        print("clique: provide --prefix or --graph", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.fn(args)
    except io.ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except ParseHint as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as err:
        print(f"precondition unmet: {err}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
