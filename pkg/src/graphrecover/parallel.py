"""Worker-count resolution and deterministic block-parallel execution.

Workers only ever write disjoint slices of preallocated arrays, so results
are identical for any thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "GRAPHRECOVER_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_blocked(fn, total: int, threads: int | None = None, min_block: int = 2048) -> None:
    """Call fn(start, stop) over a partition of range(total)."""
    threads = resolve_threads(threads)
    if total <= 0:
        return
    if threads <= 1 or total <= min_block:
        fn(0, total)
        return
    block = max(min_block, (total + threads - 1) // threads)
    spans = [(s, min(s + block, total)) for s in range(0, total, block)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(lambda span: fn(span[0], span[1]), spans))
