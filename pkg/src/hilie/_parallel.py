"""Deterministic chunked sampling with an optional thread pool."""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

MAX_CHUNKS = 16


def worker_count():
    """Worker cap from HILIE_THREADS (default: CPU count)."""
    raw = os.environ.get("HILIE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def chunk_sizes(total, chunks=MAX_CHUNKS):
    k = max(1, min(total, chunks))
    base, extra = divmod(total, k)
    return [base + (1 if i < extra else 0) for i in range(k)]


def map_chunks(fn, total, seed):
    """Run fn(rng, count) over fixed chunks and return the list of results.

    The chunking and the per-chunk seeds depend only on (total, seed), so
    the merged result is independent of how many workers run the chunks.
    """
    sizes = chunk_sizes(total)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(np.random.default_rng(s), n) for s, n in zip(children, sizes)]
    workers = min(worker_count(), len(jobs))
    if workers <= 1:
        return [fn(rng, n) for rng, n in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))
