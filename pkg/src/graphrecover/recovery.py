"""Recovery of a near-original graph from a pattern-complemented input.

The main loop shrinks a working set W.  While W is large enough, any
vertex whose current neighborhood is close to one of the recorded sets is
removed and wired in the output approximation F to that set's surviving
members; when no vertex matches, the neighborhood of the vertex of
maximum similarity degree becomes the next recorded set.  F approximates
what the pattern alone would produce on an edgeless graph, so the final
answer is the symmetric difference of the input with F.

All state updates are incremental: distances to recorded sets are
maintained under removals (each removal changes a distance by at most
one), and F is accumulated one-sided and symmetrized at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bitset
from .graph import (
    Graph,
    VertexSet,
    disagreement_vertices,
    graph_symmetric_difference,
    induced_subgraph,
)
from .generators import PatternedInstance
from .pattern import perfect_blowup, restrict_partitioned
from .similarity import _similarity_degrees_masked, perfectness


@dataclass(frozen=True)
class RecoveryConfig:
    """Degeneracy and pattern-size parameters with their derived thresholds."""

    d: int
    K: int

    def __post_init__(self):
        if self.d < 1 or self.K < 1:
            raise ValueError("d and K must be at least 1")

    @property
    def size_floor(self) -> int:
        """Loop guard: the working set must keep at least this many vertices."""
        return 1100 * self.d * self.K**5

    @property
    def similarity_threshold(self) -> int:
        """Similarity-graph threshold used when recording a new set."""
        return 160 * self.d * self.K**3

    @property
    def match_threshold(self) -> int:
        """Distance under which a vertex matches a recorded set."""
        return 1140 * self.d * self.K**4

    @property
    def disagreement_bound(self) -> int:
        """Guaranteed bound on disagreeing vertices for true inputs."""
        return 4000 * self.d * self.K**6


@dataclass(frozen=True)
class DiscoveredSet:
    vertex: int
    w_size: int
    members: VertexSet


@dataclass(frozen=True)
class Removal:
    vertex: int
    set_index: int
    w_size: int  # |W| when the match fired, before removing the vertex


@dataclass
class RecoveryOutcome:
    source: Graph
    config: RecoveryConfig
    blowup: Graph
    discovered: list[DiscoveredSet]
    removals: list[Removal]
    residual: VertexSet
    recovered: Graph | None = None

    @property
    def below_threshold(self) -> bool:
        return not self.discovered and not self.removals


def recover_blowup(h: Graph, cfg: RecoveryConfig, threads: int | None = None) -> RecoveryOutcome:
    """Run the approximation loop and return F with full logs.

    Matching vertices are removed smallest-id first, except that vertices
    outside every recorded set are preferred: they can never receive
    further F-edges by staying, so removing them early keeps F closer to
    the recorded sets for everyone removed afterwards.  Within a vertex,
    recorded sets are tried in discovery order.
    """
    n = h.n
    rows = h.rows.copy()  # maintained as the adjacency of h[W]
    w_bool = np.ones(n, dtype=bool)
    w_size = n
    f_half = np.zeros_like(rows)
    set_masks: list[np.ndarray] = []  # S_i intersected with current W
    set_bool: list[np.ndarray] = []   # S_i as recorded (static)
    dist_cols: list[np.ndarray] = []  # |N_{h[W]}(v) vs S_i cap W|
    in_union = np.zeros(n, dtype=bool)
    discovered: list[DiscoveredSet] = []
    removals: list[Removal] = []
    thr = cfg.match_threshold

    while w_size >= cfg.size_floor:
        match = np.zeros(n, dtype=bool)
        for col in dist_cols:
            match |= col <= thr
        match &= w_bool
        if match.any():
            preferred = match & ~in_union
            v = int(np.argmax(preferred)) if preferred.any() else int(np.argmax(match))
            i_match = next(i for i, col in enumerate(dist_cols) if col[v] <= thr)
            removals.append(Removal(v, i_match, w_size))
            adj = bitset.unpack(rows[v], n)  # column v of h[W], pre-removal
            # removal changes each distance by whether v sat on exactly
            # one side of the compared pair
            for i, col in enumerate(dist_cols):
                if set_bool[i][v]:
                    col -= 1
                    col += adj
                else:
                    col -= adj
            w_bool[v] = False
            w_size -= 1
            bitset.clear_column(rows, v)
            rows[v, :] = 0
            for mask in set_masks:
                bitset.clear_bit(mask, v)
            f_half[v] = set_masks[i_match]  # S_i cap W after the removal
        else:
            if len(discovered) > n:
                raise RuntimeError(
                    "recorded more sets than vertices; input shows no usable "
                    "structure for these parameters"
                )
            members = np.flatnonzero(w_bool)
            counts = _similarity_degrees_masked(
                rows, members, n, cfg.similarity_threshold, threads
            )
            v = int(members[int(np.argmax(counts))])
            s_mask = rows[v].copy()
            set_masks.append(s_mask.copy())
            sb = bitset.unpack(s_mask, n).astype(bool)
            set_bool.append(sb)
            in_union |= sb
            dist = bitset.row_popcounts(rows ^ s_mask)
            dist_cols.append(dist.astype(np.int64))
            discovered.append(DiscoveredSet(v, w_size, VertexSet(n, s_mask)))

    f_rows = f_half | bitset.transpose(f_half, n) if n else f_half
    blowup = Graph(n, f_rows, _validate=False)
    residual = VertexSet(n, bitset.pack(w_bool.astype(np.uint8)) if n else bitset.zeros(0))
    return RecoveryOutcome(h, cfg, blowup, discovered, removals, residual)


def recover(h: Graph, cfg: RecoveryConfig, threads: int | None = None) -> RecoveryOutcome:
    """recover_blowup plus the recovered graph: the input XOR F."""
    outcome = recover_blowup(h, cfg, threads)
    outcome.recovered = graph_symmetric_difference(h, outcome.blowup)
    return outcome


@dataclass(frozen=True)
class DiscoveredSetCheck:
    index: int
    vertex: int
    node: int
    distance: int
    bound: int
    passed: bool


@dataclass
class VerificationReport:
    disagreement: VertexSet          # vertices where F and the ideal blow-up differ
    disagreement_count: int
    bound: int
    within_bound: bool
    recovered_matches: bool          # H-vs-G differs exactly where F-vs-ideal does
    discovered_count: int
    count_within_nodes: bool
    input_matches_truth: bool
    set_checks: tuple[DiscoveredSetCheck, ...] = field(default_factory=tuple)
    sets_all_perfect: bool = True

    @property
    def passed(self) -> bool:
        return self.within_bound and self.recovered_matches and self.count_within_nodes


def verify_against_truth(outcome: RecoveryOutcome, truth: PatternedInstance,
                         check_discovered: bool = True) -> VerificationReport:
    """Compare an outcome against the ground-truth bundle that produced it.

    The guarantees assume the outcome was computed from truth.applied;
    whether that held is itself reported.  Assertions land in booleans so
    that corrupted inputs still produce a full report instead of raising.
    """
    if truth.applied.n != outcome.source.n:
        raise ValueError(
            f"truth bundle has {truth.applied.n} vertices, outcome has {outcome.source.n}"
        )
    cfg = outcome.config
    ideal = perfect_blowup(truth.pg)
    u_star = disagreement_vertices(outcome.blowup, ideal)
    recovered = outcome.recovered
    if recovered is None:
        recovered = graph_symmetric_difference(outcome.source, outcome.blowup)
    h_vs_g = disagreement_vertices(recovered, truth.graph)
    checks: list[DiscoveredSetCheck] = []
    if check_discovered:
        order = [r.vertex for r in outcome.removals]
        bound = 570 * cfg.d * cfg.K**4
        for idx, disc in enumerate(outcome.discovered):
            removed_before = outcome.source.n - disc.w_size
            if removed_before == 0:
                rep = perfectness(truth.pg, outcome.source, disc.vertex)
            else:
                alive = np.ones(outcome.source.n, dtype=bool)
                alive[order[:removed_before]] = False
                w_i = VertexSet(outcome.source.n, bitset.pack(alive.astype(np.uint8)))
                pg_i, ids = restrict_partitioned(truth.pg, w_i)
                h_i, _ = induced_subgraph(outcome.source, w_i)
                v_new = int(np.searchsorted(ids, disc.vertex))
                rep = perfectness(pg_i, h_i, v_new)
            checks.append(DiscoveredSetCheck(
                idx, disc.vertex, rep.best_node, rep.distance, bound,
                rep.distance <= bound,
            ))
    return VerificationReport(
        disagreement=u_star,
        disagreement_count=len(u_star),
        bound=cfg.disagreement_bound,
        within_bound=len(u_star) <= cfg.disagreement_bound,
        recovered_matches=(h_vs_g == u_star),
        discovered_count=len(outcome.discovered),
        count_within_nodes=len(outcome.discovered) <= cfg.K,
        input_matches_truth=(truth.applied == outcome.source),
        set_checks=tuple(checks),
        sets_all_perfect=all(c.passed for c in checks),
    )
