"""
Lexicographic enumeration of S_n and sharded folds over it.

A shard is a contiguous block of lexicographic ranks [start, stop). Its
first permutation comes from the factorial number system and the rest from
the lexicographic successor, so shards never materialize S_n.
"""

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from math import factorial
from typing import Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from .errors import CapacityError, UndefinedOperationError
from ..utils.logging_config import get_logger


logger = get_logger('enumeration')

DEFAULT_MAX_EXHAUSTIVE_N = 10


def unrank_permutation(n: int, rank: int) -> Tuple[int, ...]:
    """The permutation of lexicographic rank `rank` (0-based) in S_n."""
    if not 0 <= rank < factorial(n):
        raise UndefinedOperationError(f"rank {rank} out of range for S_{n}")
    pool = list(range(1, n + 1))
    out = []
    for position in range(n, 0, -1):
        block = factorial(position - 1)
        digit, rank = divmod(rank, block)
        out.append(pool.pop(digit))
    return tuple(out)


def rank_permutation(entries: Sequence[int]) -> int:
    """Inverse of unrank_permutation."""
    pool = sorted(entries)
    rank = 0
    n = len(entries)
    for position, value in enumerate(entries):
        digit = pool.index(value)
        rank += digit * factorial(n - position - 1)
        pool.pop(digit)
    return rank


def next_permutation(entries: List[int]) -> bool:
    """Advance entries to the lexicographic successor in place; False at the last one."""
    i = len(entries) - 2
    while i >= 0 and entries[i] > entries[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = len(entries) - 1
    while entries[j] < entries[i]:
        j -= 1
    entries[i], entries[j] = entries[j], entries[i]
    entries[i + 1:] = reversed(entries[i + 1:])
    return True


def iter_permutations(n: int, start: int = 0, stop: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """S_n in lexicographic order, restricted to ranks [start, stop)."""
    total = factorial(n)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    current = list(unrank_permutation(n, start))
    for _ in range(stop - start):
        yield tuple(current)
        next_permutation(current)


def shard_bounds(total: int, shards: int) -> List[Tuple[int, int]]:
    """Split [0, total) into `shards` contiguous blocks of near-equal size."""
    shards = max(1, min(shards, total))
    base, extra = divmod(total, shards)
    bounds = []
    start = 0
    for s in range(shards):
        stop = start + base + (1 if s < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def check_exhaustive(n: int, max_n: int = DEFAULT_MAX_EXHAUSTIVE_N) -> None:
    if n < 1:
        raise UndefinedOperationError(f"n must be positive, got {n}")
    if n > max_n:
        raise CapacityError(f"exhaustive enumeration of S_{n} exceeds max_exhaustive_n={max_n}")


def fold_shard(n: int, start: int, stop: int, statistic: Callable, extra: Tuple = ()) -> Counter:
    """Counter of statistic(entries, *extra) over one shard; None values are skipped."""
    counts = Counter()
    for entries in iter_permutations(n, start, stop):
        key = statistic(entries, *extra)
        if key is not None:
            counts[key] += 1
    return counts


def _fold_task(args) -> Counter:
    return fold_shard(*args)


def parallel_fold(n: int, statistic: Callable, extra: Tuple = (), workers: int = 1,
                  shards: Optional[int] = None) -> Dict[Hashable, int]:
    """
    Fold a statistic over all of S_n.

    Args:
        n: Permutation length
        statistic: module-level function (entries, *extra) -> hashable key or None
        extra: extra positional arguments for statistic
        workers: worker processes (1 runs in-process)
        shards: shard count (defaults to 4 per worker)

    Returns:
        key -> count, sorted by key; independent of workers and shards
    """
    total = factorial(n)
    bounds = shard_bounds(total, shards or 4 * max(1, workers))
    tasks = [(n, start, stop, statistic, extra) for start, stop in bounds]

    merged = Counter()
    if workers <= 1 or len(tasks) == 1:
        for task in tasks:
            merged.update(_fold_task(task))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for partial in pool.map(_fold_task, tasks):
                merged.update(partial)

    logger.debug(f"Folded {statistic.__name__} over S_{n} in {len(tasks)} shards")
    return dict(sorted(merged.items(), key=lambda item: _sort_key(item[0])))


def _sort_key(key):
    # keys are ints, bools or tuples of them; None never reaches here
    return (0, key) if not isinstance(key, tuple) else (1, key)
