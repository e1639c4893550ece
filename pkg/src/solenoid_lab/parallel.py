"""Internal threading helpers.

Work is split into chunks of a fixed size regardless of the thread count, so
floating-point kernels see identical array extents and produce identical
output whether the chunks run sequentially or on a pool. SOLENOID_LAB_THREADS
caps the pool size; unset means sequential.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

ENV_THREADS = "SOLENOID_LAB_THREADS"
CHUNK = 1 << 16


def thread_count() -> int:
    raw = os.environ.get(ENV_THREADS)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ValueError(f"{ENV_THREADS} must be a positive integer, got {raw!r}")
    return n


def chunk_spans(total: int, chunk: int = CHUNK) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def run_chunks(fn: Callable[[int, int], None], total: int, threads: int | None = None) -> None:
    """Invoke fn(lo, hi) over fixed chunk spans, on a pool when allowed."""
    spans = chunk_spans(total)
    n = thread_count() if threads is None else threads
    if n <= 1 or len(spans) <= 1:
        for lo, hi in spans:
            fn(lo, hi)
        return
    with ThreadPoolExecutor(max_workers=min(n, len(spans))) as pool:
        # Results land in caller-owned slices; completion order is irrelevant.
        list(pool.map(lambda span: fn(*span), spans))
