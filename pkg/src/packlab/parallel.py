"""Deterministic worker-pool helpers.

Trials are independent and carry their own seeds, so results are merged in
submission order and the output is byte-identical for any worker count.
PACKLAB_THREADS caps parallelism globally.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["thread_budget", "ordered_map", "spawn_seeds"]


def thread_budget(requested: int | None = None) -> int:
    cap = os.environ.get("PACKLAB_THREADS")
    n = requested if requested is not None else (os.cpu_count() or 1)
    if cap is not None:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def ordered_map(fn, items, threads: int | None = None) -> list:
    """Map fn over items, in parallel, returning results in item order."""
    items = list(items)
    n = thread_budget(threads)
    if n == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def spawn_seeds(master_seed: int, count: int) -> list[int]:
    """Per-trial seeds derived from a master seed, stable across platforms."""
    import numpy as np

    ss = np.random.SeedSequence(master_seed)
    return [int(s.generate_state(1)[0]) for s in ss.spawn(count)]
