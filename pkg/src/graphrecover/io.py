"""Text file formats: edge lists, patterns, partitions, instance bundles.

All writers emit deterministic bytes (sorted lines, LF endings) so that
identical inputs produce identical files on any platform.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from .graph import Graph, GraphBuilder
from .pattern import PartitionedGraph, Pattern, first_forbidden_twins

GRAPH_SUFFIX = ".graph"
PATTERN_SUFFIX = ".pattern"
PARTITION_SUFFIX = ".partition"
APPLIED_SUFFIX = ".applied"


class ParseError(Exception):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line
        self.message = message


def _content_lines(path):
    """(line_number, stripped_text) pairs, skipping blanks and comments."""
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for no, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            out.append((no, text))
    return out


def _ints(path, no, text, count, what):
    parts = text.split()
    if len(parts) != count:
        raise ParseError(path, no, f"expected {what}, got {text!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(path, no, f"expected {what}, got {text!r}") from None


def _edge_arrays(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    us, vs = [], []
    from . import bitset

    for u in range(g.n):
        nbrs = bitset.to_indices(g.row(u), g.n)
        nbrs = nbrs[nbrs > u]
        if nbrs.size:
            us.append(np.full(nbrs.size, u, dtype=np.int64))
            vs.append(nbrs)
    if not us:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    return np.concatenate(us), np.concatenate(vs)


def write_edge_list(path, g: Graph) -> None:
    us, vs = _edge_arrays(g)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{g.n} {us.size}\n")
        chunk = 1 << 18
        for lo in range(0, us.size, chunk):
            pairs = zip(us[lo:lo + chunk].tolist(), vs[lo:lo + chunk].tolist())
            fh.write("".join(f"{u} {v}\n" for u, v in pairs))


def _graph_from_edge_arrays(path, n: int, m: int, us: np.ndarray, vs: np.ndarray) -> Graph:
    from . import bitset

    if us.size != m:
        raise ParseError(path, 1, f"header says {m} edges, file has {us.size}")
    if us.size:
        if not (us < vs).all() or us.min() < 0 or vs.max() >= n:
            raise ParseError(path, 1, "an edge violates 0 <= u < v < n")
        key = us * n + vs
        if np.unique(key).size != key.size:
            raise ParseError(path, 1, "duplicate edge present")
    rows = np.zeros((n, bitset.word_count(n)), dtype=np.uint64)
    for a, b in ((us, vs), (vs, us)):
        np.bitwise_or.at(rows, (a, b // 64), np.uint64(1) << (b % 64).astype(np.uint64))
    return Graph(n, rows, _validate=False)


def read_edge_list(path) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        body = fh.read()
    if "#" not in body:
        # fast path: whitespace tokens, precise diagnostics via fallback
        try:
            tokens = np.array(body.split(), dtype=np.int64)
        except ValueError:
            tokens = None
        if tokens is not None and tokens.size >= 2 and tokens.size % 2 == 0:
            n, m = int(tokens[0]), int(tokens[1])
            if n >= 0 and m >= 0:
                pairs = tokens[2:].reshape(-1, 2)
                try:
                    return _graph_from_edge_arrays(path, n, m, pairs[:, 0].copy(), pairs[:, 1].copy())
                except ParseError:
                    pass  # reparse line by line for a useful message
    lines = _content_lines(path)
    if not lines:
        raise ParseError(path, 1, "missing 'n m' header")
    no, text = lines[0]
    n, m = _ints(path, no, text, 2, "header 'n m'")
    if n < 0 or m < 0:
        raise ParseError(path, no, "n and m must be nonnegative")
    b = GraphBuilder(n)
    count = 0
    for no, text in lines[1:]:
        u, v = _ints(path, no, text, 2, "edge 'u v'")
        if not (0 <= u < v < n):
            raise ParseError(path, no, f"edge ({u},{v}) must satisfy 0 <= u < v < {n}")
        if b.has_edge(u, v):
            raise ParseError(path, no, f"duplicate edge ({u},{v})")
        b.add_edge(u, v)
        count += 1
    if count != m:
        raise ParseError(path, lines[0][0], f"header says {m} edges, file has {count}")
    return b.build()


def write_pattern(path, p: Pattern) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{p.nodes}\n")
        for u in sorted(p.loops):
            fh.write(f"loop {u}\n")
        for u, v in sorted(p.edges):
            fh.write(f"edge {u} {v}\n")


def read_pattern(path, warn=None) -> Pattern:
    lines = _content_lines(path)
    if not lines:
        raise ParseError(path, 1, "missing node-count header")
    no, text = lines[0]
    (k,) = _ints(path, no, text, 1, "node count")
    if k < 0:
        raise ParseError(path, no, "node count must be nonnegative")
    loops, edges = set(), set()
    for no, text in lines[1:]:
        parts = text.split()
        if parts[0] == "loop":
            (u,) = _ints(path, no, " ".join(parts[1:]), 1, "'loop u'")
            if not 0 <= u < k:
                raise ParseError(path, no, f"node {u} out of range")
            loops.add(u)
        elif parts[0] == "edge":
            u, v = _ints(path, no, " ".join(parts[1:]), 2, "'edge u v'")
            if not (0 <= u < k and 0 <= v < k) or u == v:
                raise ParseError(path, no, f"edge ({u},{v}) out of range")
            edges.add((min(u, v), max(u, v)))
        else:
            raise ParseError(path, no, f"expected 'loop u' or 'edge u v', got {text!r}")
    pat = Pattern(k, frozenset(edges), frozenset(loops))
    bad = first_forbidden_twins(pat)
    if bad is not None:
        stream = warn if warn is not None else sys.stderr
        print(
            f"warning: {path}: nodes {bad[0]} and {bad[1]} are mergeable twins; "
            "not a valid pattern (reduce_pattern can canonicalize it)",
            file=stream,
        )
    return pat


def write_partition(path, assignment) -> None:
    assignment = np.asarray(assignment)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for v, u in enumerate(assignment.tolist()):
            fh.write(f"{v} {u}\n")


def read_partition(path, n: int | None = None) -> np.ndarray:
    lines = _content_lines(path)
    seen: dict[int, int] = {}
    for no, text in lines:
        v, u = _ints(path, no, text, 2, "'vertexId nodeId'")
        if v < 0 or u < 0:
            raise ParseError(path, no, "ids must be nonnegative")
        if v in seen:
            raise ParseError(path, no, f"vertex {v} assigned twice")
        seen[v] = u
    total = n if n is not None else len(seen)
    missing = [v for v in range(total) if v not in seen]
    if missing or len(seen) != total:
        where = missing[0] if missing else max(seen)
        raise ParseError(path, lines[-1][0] if lines else 1,
                         f"assignment is not a total map on 0..{total - 1} (check vertex {where})")
    return np.array([seen[v] for v in range(total)], dtype=np.int32)


def write_instance(prefix, graph: Graph, pg: PartitionedGraph, applied: Graph) -> None:
    prefix = str(prefix)
    write_edge_list(prefix + GRAPH_SUFFIX, graph)
    write_pattern(prefix + PATTERN_SUFFIX, pg.pattern)
    write_partition(prefix + PARTITION_SUFFIX, pg.assignment)
    write_edge_list(prefix + APPLIED_SUFFIX, applied)


def read_instance(prefix, warn=None) -> tuple[PartitionedGraph, Graph]:
    prefix = str(prefix)
    g = read_edge_list(prefix + GRAPH_SUFFIX)
    pat = read_pattern(prefix + PATTERN_SUFFIX, warn=warn)
    assignment = read_partition(prefix + PARTITION_SUFFIX, n=g.n)
    if g.n and pat.nodes and int(assignment.max()) >= pat.nodes:
        raise ParseError(prefix + PARTITION_SUFFIX, 1,
                         f"assignment uses node {int(assignment.max())} but pattern has {pat.nodes} nodes")
    applied = read_edge_list(prefix + APPLIED_SUFFIX)
    if applied.n != g.n:
        raise ParseError(prefix + APPLIED_SUFFIX, 1,
                         f"applied graph has {applied.n} vertices, base graph has {g.n}")
    return PartitionedGraph(g, pat, assignment), applied


def instance_paths(prefix) -> list[Path]:
    prefix = str(prefix)
    return [Path(prefix + s) for s in (GRAPH_SUFFIX, PATTERN_SUFFIX, PARTITION_SUFFIX, APPLIED_SUFFIX)]
