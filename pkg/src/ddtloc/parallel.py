"""Deterministic parallel helpers.

Results are combined in input order with a fixed reduction shape, so every
thread count produces bit-identical output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: int) -> int:
    """0 means one worker per available CPU; negative is invalid."""
    if threads < 0:
        raise ValueError(f"threads must be >= 0, got {threads}")
    if threads == 0:
        return os.cpu_count() or 1
    return threads


def ordered_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 0) -> list[R]:
    """Map ``fn`` over ``items``, returning results in input order.

    With one thread this is a plain loop; otherwise a bounded window of
    futures keeps memory proportional to the worker count.
    """
    n_workers = resolve_threads(threads)
    items = list(items)
    if n_workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    results: list[R] = [None] * len(items)  # type: ignore[list-item]
    window = 2 * n_workers
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        pending = {}
        next_submit = 0
        next_collect = 0
        while next_collect < len(items):
            while next_submit < len(items) and len(pending) < window:
                pending[next_submit] = pool.submit(fn, items[next_submit])
                next_submit += 1
            results[next_collect] = pending.pop(next_collect).result()
            next_collect += 1
    return results


def tree_reduce(combine: Callable[[R, R], R], values: Iterable[R]) -> R:
    """Combine values pairwise, left to right, bottom up.

    The reduction tree depends only on the number of values, never on
    timing, so floating-point results are reproducible.
    """
    stack: list[tuple[int, R]] = []  # (level, value), like a binary counter
    count = 0
    for value in values:
        level = 0
        while stack and stack[-1][0] == level:
            _, left = stack.pop()
            value = combine(left, value)
            level += 1
        stack.append((level, value))
        count += 1
    if count == 0:
        raise ValueError("tree_reduce needs at least one value")
    while len(stack) > 1:
        _, right = stack.pop()
        _, left = stack.pop()
        stack.append((0, combine(left, right)))
    return stack[0][1]
