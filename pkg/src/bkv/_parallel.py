"""Order-preserving chunked map, capped by the BKV_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

from bkv.errors import InvalidArgument

T = TypeVar("T")
R = TypeVar("R")

MIN_CHUNK = 4096


def worker_count() -> int:
    raw = os.environ.get("BKV_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise InvalidArgument(f"BKV_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InvalidArgument(f"BKV_THREADS must be a positive integer, got {raw!r}")
    return n


def chunked_map(fn: Callable[[Sequence[T]], list[R]], items: Sequence[T]) -> list[R]:
    """Apply ``fn`` to contiguous chunks of ``items`` and concatenate in order.

    The output never depends on the worker count.
    """
    workers = min(worker_count(), max(1, len(items) // MIN_CHUNK))
    if workers == 1:
        return list(fn(items))
    size = -(-len(items) // workers)
    chunks = [items[i : i + size] for i in range(0, len(items), size)]
    out: list[R] = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(fn, chunks):
            out.extend(part)
    return out
