import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar('T')
R = TypeVar('R')


def worker_count(threads: int) -> int:
    if threads <= 0:
        return os.cpu_count() or 1
    return threads


def parallel_map(func: Callable[[T], R], items: Iterable[T], threads: int) -> list[R]:
    """Order-preserving map; runs inline when only one worker is allowed."""
    items = list(items)
    workers = min(worker_count(threads), max(len(items), 1))
    if workers == 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
