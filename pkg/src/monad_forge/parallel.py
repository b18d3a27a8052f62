"""Order-preserving parallel map, capped by ``MONAD_FORGE_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
U = TypeVar("U")

ENV_VAR = "MONAD_FORGE_THREADS"


def worker_count() -> int:
    raw = os.environ.get(ENV_VAR, "")
    try:
        n = int(raw)
    except ValueError:
        n = min(4, os.cpu_count() or 1)
    return max(1, n)


def pmap(fn: Callable[[T], U], items: Iterable[T]) -> list[U]:
    """``[fn(x) for x in items]``, possibly on several threads; result order is input order."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
