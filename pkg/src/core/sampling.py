"""
Seeded uniform random permutations.

The sample is cut into fixed-size chunks; chunk c draws from its own PCG64
stream spawned from SeedSequence(seed), so the rows (and every estimate
computed from them) are the same whatever the worker count.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, List, Tuple

import numpy as np

from ..utils.logging_config import get_logger


logger = get_logger('sampling')

DEFAULT_CHUNK_SIZE = 4096


def chunk_sizes(sample_size: int, chunk_size: int) -> List[int]:
    full, rest = divmod(sample_size, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def chunk_generator(seed: int, chunk_index: int) -> np.random.Generator:
    """PCG64 generator of one chunk: the chunk_index-th child of SeedSequence(seed)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk_index,))))


def chunk_generators(seed: int, chunks: int) -> List[np.random.Generator]:
    """One independent generator per chunk, derived from the master seed."""
    return [chunk_generator(seed, c) for c in range(chunks)]


def random_permutation_block(rng: np.random.Generator, n: int, rows: int) -> np.ndarray:
    """rows x n array, each row an independent uniform permutation of 1..n."""
    base = np.tile(np.arange(1, n + 1, dtype=np.int64), (rows, 1))
    return rng.permuted(base, axis=1)


def iter_random_permutations(n: int, sample_size: int, seed: int,
                             chunk_size: int = DEFAULT_CHUNK_SIZE) -> Iterator[Tuple[int, ...]]:
    """Yield sample_size uniform permutations of length n as tuples."""
    sizes = chunk_sizes(sample_size, chunk_size)
    for rng, rows in zip(chunk_generators(seed, len(sizes)), sizes):
        for row in random_permutation_block(rng, n, rows).tolist():
            yield tuple(row)


def _evaluate_chunk(args) -> List:
    seed, chunk_index, n, rows, statistic, extra = args
    block = random_permutation_block(chunk_generator(seed, chunk_index), n, rows)
    return [statistic(tuple(row), *extra) for row in block.tolist()]


def sample_values(n: int, sample_size: int, seed: int, statistic: Callable, extra: Tuple = (),
                  workers: int = 1, chunk_size: int = DEFAULT_CHUNK_SIZE) -> List:
    """
    statistic(entries, *extra) for every sampled permutation, in sample order.

    Args:
        n: Permutation length
        sample_size: Number of permutations
        seed: Master seed
        statistic: module-level function of the entries tuple
        extra: extra positional arguments for statistic
        workers: worker processes
        chunk_size: rows per generator stream

    Returns:
        List of statistic values (None for rejected draws)
    """
    sizes = chunk_sizes(sample_size, chunk_size)
    tasks = [(seed, c, n, rows, statistic, extra) for c, rows in enumerate(sizes)]
    values: List = []
    if workers <= 1 or len(tasks) == 1:
        for task in tasks:
            values.extend(_evaluate_chunk(task))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_evaluate_chunk, tasks):
                values.extend(part)
    logger.debug(f"Sampled {sample_size} permutations of length {n} in {len(tasks)} chunks")
    return values
