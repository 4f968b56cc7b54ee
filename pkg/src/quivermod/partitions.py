"""Integer partitions."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

from .errors import QuivermodError


def is_partition(parts: Sequence[int]) -> bool:
    return all(isinstance(p, int) and p > 0 for p in parts) and all(a >= b for a, b in zip(parts, parts[1:]))


def check_partition(parts: Sequence[int]) -> tuple[int, ...]:
    parts = tuple(parts)
    if not is_partition(parts):
        raise QuivermodError(f"{list(parts)} is not a weakly decreasing sequence of positive integers")
    return parts


def partitions(k: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``k`` in reverse lexicographic order."""
    if largest is None:
        largest = k
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in partitions(k - first, first):
            yield (first,) + rest


def conjugate(parts: Sequence[int]) -> tuple[int, ...]:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= i) for i in range(1, parts[0] + 1))


@lru_cache(maxsize=None)
def partition_count(k: int) -> int:
    """Euler's pentagonal recurrence."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    total = 0
    j = 1
    while True:
        g1 = j * (3 * j - 1) // 2
        if g1 > k:
            break
        sign = 1 if j % 2 else -1
        total += sign * partition_count(k - g1)
        g2 = j * (3 * j + 1) // 2
        if g2 <= k:
            total += sign * partition_count(k - g2)
        j += 1
    return total
