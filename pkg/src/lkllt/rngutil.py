"""Deterministic, splittable random-stream plumbing.

A master seed fans out to fixed-size replicate blocks.  Block k owns
replicates [k*BLOCK, (k+1)*BLOCK) and draws from a Philox generator keyed by
(master_seed, k).  Because keys never depend on the total replicate count,
growing the count leaves earlier replicates' draws unchanged, and blocks may
be evaluated in any order (or in parallel) with identical results.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator

import numpy as np

BLOCK = 4096


def block_rng(master_seed: int, block_index: int) -> np.random.Generator:
    """Generator for one replicate block."""
    return np.random.Generator(
        np.random.Philox(key=[master_seed & 0xFFFFFFFFFFFFFFFF, block_index])
    )


def blocks(master_seed: int, replicates: int) -> Iterator[tuple[int, int, np.random.Generator]]:
    """Yield (start, count, rng) triples covering range(replicates)."""
    start = 0
    k = 0
    while start < replicates:
        count = min(BLOCK, replicates - start)
        yield start, count, block_rng(master_seed, k)
        start += count
        k += 1


def thread_count() -> int:
    raw = os.environ.get("LKLLT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def map_blocks(fn: Callable, master_seed: int, replicates: int) -> list:
    """Apply ``fn(start, count, rng)`` to every block, in block order.

    Runs on a thread pool when LKLLT_THREADS > 1; results are returned in
    block order either way, so the reduction downstream is deterministic.
    """
    work = list(blocks(master_seed, replicates))
    n_threads = thread_count()
    if n_threads == 1 or len(work) == 1:
        return [fn(*w) for w in work]
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        futures = [pool.submit(fn, *w) for w in work]
        return [f.result() for f in futures]
