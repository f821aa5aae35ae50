"""Fixed-parameter clique search on pattern-complemented graphs.

Given the witness (graph, pattern, partition) behind the complemented
graph, cliques factor through the parts: a big loop part yields a clique
directly via coloring, and otherwise each part admits only boundedly many
cliques, so a pruned product search over per-part choices is exhaustive.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
import threading

import numpy as np

from . import bitset
from .graph import Graph, VertexSet, degeneracy, induced_subgraph
from .parallel import resolve_threads
from .pattern import PartitionedGraph, apply_pattern


@dataclass(frozen=True)
class CliqueQuery:
    k: int
    pg: PartitionedGraph
    d: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.d < 0:
            raise ValueError("d must be nonnegative")


def _peel_order(g: Graph) -> list[int]:
    return degeneracy(g)[1]


def _greedy_color_classes(g: Graph) -> list[list[int]]:
    """Greedy coloring along the reversed peel order: at most d+1 colors."""
    order = list(reversed(_peel_order(g)))
    color = {}
    classes: list[list[int]] = []
    for v in order:
        used = {color[int(u)] for u in g.neighbors(v) if int(u) in color}
        c = 0
        while c in used:
            c += 1
        color[v] = c
        while len(classes) <= c:
            classes.append([])
        classes[c].append(v)
    return classes


def _cliques_within(rows: np.ndarray, members: list[int], cap: int) -> list[tuple[int, ...]]:
    """All cliques (as sorted member tuples, empty included) of size <= cap
    among the given vertices, by ordered extension."""
    out: list[tuple[int, ...]] = [()]
    if cap <= 0:
        return out

    def extend(chosen: list[int], candidates: list[int]) -> None:
        for i, v in enumerate(candidates):
            chosen.append(v)
            out.append(tuple(chosen))
            if len(chosen) < cap:
                nxt = [u for u in candidates[i + 1:] if bitset.get_bit(rows[v], u)]
                extend(chosen, nxt)
            chosen.pop()

    extend([], members)
    return out


def enumerate_part_cliques(pg: PartitionedGraph, u: int, h: Graph, cap_k: int,
                           d: int) -> list[VertexSet]:
    """All cliques of h restricted to part u, up to size cap_k, empty set
    included.

    Loopless parts coincide with the original graph there, so every clique
    sits inside some vertex plus its few back-neighbors of a peel order;
    loop parts must be small enough (at most d*cap_k vertices) for subset
    enumeration.
    """
    part = pg.part(u)
    members = [int(v) for v in part.members()]
    if pg.pattern.has_loop(u) and len(members) > d * cap_k:
        raise ValueError(
            f"part {u} has a loop and {len(members)} > d*cap_k = {d * cap_k} vertices"
        )
    cliques: list[tuple[int, ...]]
    if pg.pattern.has_loop(u):
        cliques = _cliques_within(h.rows, members, cap_k)
    else:
        sub, ids = induced_subgraph(h, part)
        order = _peel_order(sub)
        seen_later = np.zeros(sub.n, dtype=bool)
        cliques = [()]
        for idx in order:
            fwd = [int(x) for x in sub.neighbors(idx) if not seen_later[int(x)]]
            seen_later[idx] = True
            for r in range(1, min(len(fwd), cap_k - 1) + 1):
                for combo in combinations(fwd, r):
                    if all(sub.has_edge(a, b) for a, b in combinations(combo, 2)):
                        cliques.append(tuple(sorted([idx, *combo])))
            if cap_k >= 1:
                cliques.append((idx,))
        cliques = [tuple(int(ids[i]) for i in c) for c in cliques]
    bound = max(2 ** (max(d, 1) * cap_k), 2 ** max(d, 1) * len(members))
    assert len(cliques) <= bound, f"enumerated {len(cliques)} cliques, bound {bound}"
    return [VertexSet.from_indices(pg.graph.n, c) for c in sorted(cliques, key=lambda c: (len(c), c))]


def _is_clique(h: Graph, vertices: list[int]) -> bool:
    return all(h.has_edge(a, b) for a, b in combinations(vertices, 2))


@dataclass(frozen=True)
class _Choice:
    vertices: tuple[int, ...]
    mask: np.ndarray          # the members
    common: np.ndarray        # intersection of the members' rows in h


def _choices_for(h: Graph, cliques: list[tuple[int, ...]], n: int) -> list[_Choice]:
    full = bitset.tail_mask(n)
    out = []
    for c in cliques:
        mask = bitset.from_indices(n, c)
        common = full.copy()
        for v in c:
            common &= h.rows[v]
        out.append(_Choice(c, mask, common))
    return out


def find_clique(q: CliqueQuery, threads: int | None = None) -> VertexSet | None:
    """A k-clique of the complemented graph, or None if there is none.

    First tries the cheap certificate: a loop part bigger than d*k whose
    original subgraph greedily colors with a size-k class (an independent
    set there is a clique after complementation).  The stated size trigger
    alone does not force such a class for every k, so when coloring comes
    up short the search falls through to exhaustive per-part enumeration,
    which stays exact.
    """
    pg = q.pg
    d_actual = degeneracy(pg.graph)[0]
    if d_actual > q.d:
        raise ValueError(f"witness graph is {d_actual}-degenerate, above the declared d={q.d}")
    k = q.k
    n = pg.graph.n
    h = apply_pattern(pg)
    if k > n:
        return None

    oversized_loops = []
    for u in range(pg.pattern.nodes):
        if not pg.pattern.has_loop(u):
            continue
        part = pg.part(u)
        if len(part) > q.d * k:
            sub, ids = induced_subgraph(pg.graph, part)
            classes = _greedy_color_classes(sub)
            best = max(classes, key=len) if classes else []
            if len(best) >= k:
                chosen = sorted(int(ids[i]) for i in best)[:k]
                if _is_clique(h, chosen):
                    return VertexSet.from_indices(n, chosen)
            oversized_loops.append(u)

    per_node: list[list[tuple[int, ...]]] = []
    for u in range(pg.pattern.nodes):
        if u in oversized_loops:
            members = [int(v) for v in pg.part(u).members()]
            cliques = _cliques_within(h.rows, members, k)
            cliques = sorted(cliques, key=lambda c: (len(c), c))
        else:
            cliques = [tuple(int(x) for x in c.members()) for c in
                       enumerate_part_cliques(pg, u, h, k, q.d)]
        per_node.append(cliques)

    choices = [_choices_for(h, cliques, n) for cliques in per_node]
    suffix_max = [0] * (len(choices) + 1)
    for i in range(len(choices) - 1, -1, -1):
        longest = max((len(c.vertices) for c in choices[i]), default=0)
        suffix_max[i] = suffix_max[i + 1] + longest

    full = bitset.tail_mask(n)

    def search(idx: int, size: int, cand: np.ndarray, picked: list[int],
               stop: threading.Event | None) -> list[int] | None:
        if stop is not None and stop.is_set():
            return None
        if size + suffix_max[idx] < k:
            return None
        if idx == len(choices):
            return list(picked) if size == k else None
        for choice in choices[idx]:
            extra = len(choice.vertices)
            if size + extra > k:
                continue
            if extra and np.any(choice.mask & ~cand):
                continue
            before = len(picked)
            picked.extend(choice.vertices)
            got = search(idx + 1, size + extra,
                         cand & choice.common if extra else cand, picked, stop)
            if got is not None:
                return got
            del picked[before:]
        return None

    # walk first-node choices in order; workers may race ahead but the
    # answer reported is always the first successful choice in order
    first = choices[0] if choices else [_Choice((), bitset.zeros(n), full.copy())]

    def try_first(i: int, stop: threading.Event | None) -> list[int] | None:
        choice = first[i]
        extra = len(choice.vertices)
        if extra > k:
            return None
        cand = full & (choice.common if extra else full)
        return search(1, extra, cand, list(choice.vertices), stop)

    workers = resolve_threads(threads)
    result: list[int] | None = None
    if workers <= 1 or len(first) < 4:
        for i in range(len(first)):
            result = try_first(i, None)
            if result is not None:
                break
    else:
        stop = threading.Event()
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(try_first, i, stop) for i in range(len(first))]
            for fut in futures:  # in submission order: deterministic winner
                got = fut.result()
                if got is not None and result is None:
                    result = got
                    stop.set()
    if result is None:
        return None
    result = sorted(result)
    assert _is_clique(h, result) and len(result) == k
    return VertexSet.from_indices(n, result)
