"""Chunk-parallel execution with scheduling-independent results.

Work is split into numbered chunks; chunk i's output depends only on i (its
RNG seed is derived from the chunk index), so running chunks on 1 or many
workers yields identical results.  The worker count is bounded by the
LAB_WORKERS environment variable unless given explicitly.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")


def worker_count(explicit: int | None = None) -> int:
    if explicit is not None:
        return max(1, explicit)
    env = os.environ.get("LAB_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def run_chunks(fn: Callable[[int], T], n_chunks: int, workers: int | None = None) -> list[T]:
    """Evaluate fn(0..n_chunks-1), possibly in parallel; results in index order."""
    w = worker_count(workers)
    if w <= 1 or n_chunks <= 1:
        return [fn(i) for i in range(n_chunks)]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, range(n_chunks)))


def run_over(fn: Callable[[T], object], items: Sequence[T], workers: int | None = None) -> list:
    w = worker_count(workers)
    if w <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, items))
