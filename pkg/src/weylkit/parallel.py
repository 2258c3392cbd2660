"""Ordered parallel map; the worker count is capped by WEYLKIT_THREADS."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count(default: int = 1) -> int:
    raw = os.environ.get("WEYLKIT_THREADS")
    if not raw:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"WEYLKIT_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def pmap(fn, items, threads: int | None = None) -> list:
    """``[fn(x) for x in items]``, evaluated on a thread pool; results keep input order."""
    items = list(items)
    n = thread_count() if threads is None else max(1, threads)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
