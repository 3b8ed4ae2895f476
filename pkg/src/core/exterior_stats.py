"""
Exterior-length statistics over S_n.

Exact tables come from sharded folds over the lexicographic enumeration;
estimates for large n come from seeded uniform samples. Every statistic is a
module-level function of an entries tuple so that worker processes can run
it.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, isqrt
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from .enumeration import DEFAULT_MAX_EXHAUSTIVE_N, check_exhaustive, iter_permutations, parallel_fold
from .errors import PreconditionError, UndefinedOperationError
from .mobius import mobius_recursive
from .permutation import (
    Permutation, contains_entries, exterior_length_of, is_bifix_length, reduce_entries, symmetry_orbit,
)
from .rank_analysis import lattice_indicator
from .sampling import DEFAULT_CHUNK_SIZE, iter_random_permutations, sample_values
from .topology import has_disconnected_subinterval
from ..utils.exporters import frame_to_csv
from ..utils.logging_config import get_logger


logger = get_logger('exterior_stats')


# ---------------------------------------------------------------------------
# Per-permutation statistics
# ---------------------------------------------------------------------------

def exterior_length(entries: Tuple[int, ...]) -> int:
    return exterior_length_of(entries)


def has_carrier(entries: Tuple[int, ...]) -> int:
    """1 when x(tau) is not contained in i(tau); length-2 permutations count as having one."""
    n = len(entries)
    if n < 3:
        return 1
    k = exterior_length_of(entries)
    return int(not contains_entries(reduce_entries(entries[:k]), reduce_entries(entries[1:-1])))


def no_carrier(entries: Tuple[int, ...]) -> int:
    return 1 - has_carrier(entries)


def contains_sigma(entries: Tuple[int, ...], sigma: Tuple[int, ...]) -> int:
    return int(contains_entries(sigma, entries))


def mu_zero(entries: Tuple[int, ...], sigma: Tuple[int, ...]) -> Optional[int]:
    """1 when mu(sigma, tau) = 0; None when sigma is not contained in tau."""
    if not contains_entries(sigma, entries):
        return None
    result = mobius_recursive(Permutation._trusted(sigma), Permutation._trusted(entries))
    return int(result.value == 0)


def disconnected_subinterval(entries: Tuple[int, ...], sigma: Tuple[int, ...]) -> int:
    """1 when [sigma, tau] contains a disconnected subinterval of rank >= 3."""
    return int(has_disconnected_subinterval(sigma, entries))


def lattice(entries: Tuple[int, ...], sigma: Tuple[int, ...]) -> Optional[int]:
    verdict = lattice_indicator(entries, sigma)
    return None if verdict is None else int(verdict)


@dataclass(frozen=True)
class StatisticSpec:
    function: Callable
    needs_sigma: bool
    description: str


STATISTICS: Dict[str, StatisticSpec] = {
    'exterior-length': StatisticSpec(exterior_length, False, '|x(tau)|'),
    'has-carrier': StatisticSpec(has_carrier, False, 'x(tau) not contained in i(tau)'),
    'no-carrier': StatisticSpec(no_carrier, False, 'x(tau) contained in i(tau)'),
    'contains-sigma': StatisticSpec(contains_sigma, True, 'sigma <= tau'),
    'mu-zero': StatisticSpec(mu_zero, True, 'mu(sigma, tau) = 0, given sigma <= tau'),
    'disconnected-subinterval': StatisticSpec(disconnected_subinterval, True,
                                              '[sigma, tau] has a disconnected subinterval'),
    'lattice': StatisticSpec(lattice, True, '[sigma, tau] is a lattice, given sigma <= tau'),
}

# sample_statistic names -> per-permutation statistic
SAMPLE_STATISTICS = {
    'exterior-length-mean': 'exterior-length',
    'has-carrier': 'has-carrier',
    'mu-zero': 'mu-zero',
    'disconnected-subinterval': 'disconnected-subinterval',
    'contains-sigma': 'contains-sigma',
}


def _resolve(statistic: str, sigma: Optional[Permutation]) -> Tuple[Callable, Tuple]:
    if statistic not in STATISTICS:
        raise PreconditionError(f"unknown statistic {statistic!r}; choose from {sorted(STATISTICS)}")
    spec = STATISTICS[statistic]
    if spec.needs_sigma:
        if sigma is None:
            raise PreconditionError(f"statistic {statistic!r} needs sigma")
        return spec.function, (sigma.entries,)
    return spec.function, ()


# ---------------------------------------------------------------------------
# Distribution tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistributionTable:
    """counts[(n, k)] = number of tau in S_n whose statistic equals k."""
    statistic_id: str
    n_range: Tuple[int, int]
    counts: Dict[Tuple[int, int], int] = field(default_factory=dict)
    sigma: Optional[str] = None

    def row(self, n: int) -> Dict[int, int]:
        return {k: c for (m, k), c in sorted(self.counts.items()) if m == n}

    def total(self, n: int) -> int:
        return sum(self.row(n).values())

    def ns(self) -> List[int]:
        return list(range(self.n_range[0], self.n_range[1] + 1))

    def to_frame(self) -> pd.DataFrame:
        """Rows n, columns k, zero-filled integers."""
        frame = pd.Series(self.counts, dtype='int64').unstack(fill_value=0)
        frame = frame.reindex(index=self.ns(), fill_value=0).fillna(0).astype('int64')
        frame.index.name = 'n'
        frame.columns.name = 'k'
        return frame.sort_index(axis=1)

    def to_csv(self) -> str:
        return frame_to_csv(self.to_frame())

    def to_dict(self) -> Dict:
        return {
            'statistic': self.statistic_id,
            'sigma': self.sigma,
            'n_range': list(self.n_range),
            'rows': {str(n): {str(k): c for k, c in self.row(n).items()} for n in self.ns()},
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'DistributionTable':
        counts = {(int(n), int(k)): c for n, row in data['rows'].items() for k, c in row.items()}
        return cls(statistic_id=data['statistic'], n_range=tuple(data['n_range']),
                   counts=counts, sigma=data.get('sigma'))


def distribution_table(statistic: str, n_min: int, n_max: int, sigma: Optional[Permutation] = None,
                       workers: int = 1, max_n: int = DEFAULT_MAX_EXHAUSTIVE_N) -> DistributionTable:
    """Exact distribution of a statistic over S_n for n_min <= n <= n_max."""
    if n_min > n_max:
        raise PreconditionError(f"empty range {n_min}..{n_max}")
    check_exhaustive(n_min, max_n)
    check_exhaustive(n_max, max_n)
    function, extra = _resolve(statistic, sigma)
    counts = {}
    for n in range(n_min, n_max + 1):
        row = parallel_fold(n, function, extra, workers=workers)
        for k, c in row.items():
            counts[(n, int(k))] = c
        logger.info(f"{statistic} n={n}: {row}")
    return DistributionTable(statistic, (n_min, n_max), counts, str(sigma) if sigma else None)


def exterior_length_table(n_max: int, workers: int = 1, max_n: int = DEFAULT_MAX_EXHAUSTIVE_N,
                          n_min: int = 2) -> DistributionTable:
    """counts(n, k) = #{tau in S_n : |x(tau)| = k} for n_min <= n <= n_max."""
    if n_min < 2:
        raise UndefinedOperationError("the exterior needs n >= 2")
    return distribution_table('exterior-length', n_min, n_max, workers=workers, max_n=max_n)


def count_exterior_n_minus_2(n: int, workers: int = 1, max_n: int = DEFAULT_MAX_EXHAUSTIVE_N) -> int:
    """#{tau in S_n : |x(tau)| = n - 2}, by exhaustive count (equals 2n + 2)."""
    if n < 4:
        raise UndefinedOperationError("the n - 2 count is defined for n >= 4")
    table = exterior_length_table(n, workers, max_n, n_min=n)
    return table.row(n).get(n - 2, 0)


def no_carrier_counts(n_max: int, workers: int = 1, max_n: int = DEFAULT_MAX_EXHAUSTIVE_N) -> List[int]:
    """#{tau in S_n : x(tau) <= i(tau)} for n = 2 .. n_max."""
    table = distribution_table('no-carrier', 2, n_max, workers=workers, max_n=max_n)
    return [table.row(n).get(1, 0) for n in table.ns()]


def non_overlapping_divisibility(n: int, workers: int = 1, max_n: int = DEFAULT_MAX_EXHAUSTIVE_N) -> bool:
    """Whether the number of non-overlapping permutations of S_n is divisible by 4."""
    if n < 3:
        raise UndefinedOperationError("divisibility by 4 is claimed for n >= 3")
    table = exterior_length_table(n, workers, max_n, n_min=n)
    return table.row(n).get(1, 0) % 4 == 0


def expected_exterior_exact(n: int, workers: int = 1, max_n: int = DEFAULT_MAX_EXHAUSTIVE_N) -> Fraction:
    """E_n(|x(tau)|) as an exact rational."""
    table = exterior_length_table(n, workers, max_n, n_min=n)
    return Fraction(sum(k * c for k, c in table.row(n).items()), factorial(n))


def expected_exterior_from_table(table: DistributionTable, n: int) -> Fraction:
    row = table.row(n)
    return Fraction(sum(k * c for k, c in row.items()), sum(row.values()))


def _bifix_indicator(entries: Tuple[int, ...], i: int) -> int:
    return int(is_bifix_length(entries, i))


def bifix_probability_exact(n: int, i: int, workers: int = 1, max_n: int = DEFAULT_MAX_EXHAUSTIVE_N) -> Fraction:
    """
    P_n(prefix of length i = suffix of length i), exactly.

    Equals 1/i! for i <= n/2 and 2/n! for i = n - 1.
    """
    if not 1 <= i <= n - 1:
        raise UndefinedOperationError(f"bifix length {i} out of range 1..{n - 1}")
    check_exhaustive(n, max_n)
    counts = parallel_fold(n, _bifix_indicator, (i,), workers=workers)
    return Fraction(counts.get(1, 0), factorial(n))


# ---------------------------------------------------------------------------
# Closed-form bounds
# ---------------------------------------------------------------------------

def xgem_bound(n: int, m: int) -> float:
    """
    Explicit upper bound on P_n(|x(tau)| >= m).

    Terms, with r = floor(sqrt(n)):
      sum_{i=m}^{floor(n/2)} 1/i!        bifixes of length i <= n/2
      (n - r - floor(n/2)) / r!           bifix lengths in (n/2, n - r]
      (r - 2) / 2^(r - 1)                 bifix lengths in (n - r, n - 2]
      2 / n!                              bifix length n - 1
    Negative terms (tiny n) are clamped to zero.
    """
    if not 1 <= m <= n - 1:
        raise UndefinedOperationError(f"m={m} out of range 1..{n - 1}")
    r = isqrt(n)
    head = sum((Fraction(1, factorial(i)) for i in range(m, n // 2 + 1)), Fraction(0))
    middle = Fraction(max(0, n - r - n // 2), factorial(r))
    upper = Fraction(max(0, r - 2), 2 ** max(0, r - 1))
    last = Fraction(2, factorial(n))
    return float(head + middle + upper + last)


def expected_exterior_lower_bound(n: int) -> Fraction:
    """sum_{m=1}^{floor(n/2)} 1/m!."""
    return sum((Fraction(1, factorial(m)) for m in range(1, n // 2 + 1)), Fraction(0))


def containment_lower_bound(sigma: Permutation, n: int) -> float:
    """1 - (1 - 1/k!)^floor(n/k) from floor(n/k) disjoint blocks of length k = |sigma|."""
    k = len(sigma)
    return float(1 - (1 - Fraction(1, factorial(k))) ** (n // k))


def carrier_probability_bound(n: int, m: int) -> float:
    """
    min(1, (1 - 1/m!)^(floor(n/m) - 2)) + xgem_bound(n, m + 1).

    The first term bounds a short exterior avoiding the interior's disjoint
    blocks, the second an exterior longer than m.
    """
    if not 1 <= m <= n - 2:
        raise UndefinedOperationError(f"m={m} out of range 1..{n - 2}")
    exponent = n // m - 2
    short = 1.0 if exponent <= 0 else min(1.0, float((1 - Fraction(1, factorial(m))) ** exponent))
    return short + xgem_bound(n, m + 1)


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def inner_remainder(tau: Permutation) -> Union[Permutation, Tuple[()]]:
    """tau_[k+1, n-k] for k = |x(tau)|; the empty tuple when k >= n/2."""
    n = len(tau)
    k = exterior_length_of(tau.entries)
    if 2 * k >= n:
        return ()
    return Permutation._trusted(reduce_entries(tau.entries[k:n - k]))


def non_overlapping_orbits(n: int, max_n: int = DEFAULT_MAX_EXHAUSTIVE_N) -> Dict[int, int]:
    """orbit size -> number of orbits, for the symmetry action on non-overlapping tau in S_n."""
    check_exhaustive(n, max_n)
    if n < 2:
        raise UndefinedOperationError("non-overlapping permutations need n >= 2")
    seen = set()
    sizes: Dict[int, int] = {}
    for entries in iter_permutations(n):
        if entries in seen or exterior_length_of(entries) != 1:
            continue
        orbit = symmetry_orbit(Permutation._trusted(entries))
        seen.update(p.entries for p in orbit)
        sizes[len(orbit)] = sizes.get(len(orbit), 0) + 1
    return dict(sorted(sizes.items()))


def residue_census(table: DistributionTable, k: int, modulus: int) -> Dict[int, int]:
    """counts(n, k) mod modulus for every n in the table (reported, never asserted)."""
    return {n: table.row(n).get(k, 0) % modulus for n in table.ns()}


def census_records(n: int, statistic: str, sigma: Optional[Permutation] = None,
                   max_n: int = DEFAULT_MAX_EXHAUSTIVE_N) -> Iterator[Dict]:
    """One record per tau in S_n, in lexicographic order."""
    check_exhaustive(n, max_n)
    function, extra = _resolve(statistic, sigma)
    for entries in iter_permutations(n):
        yield {'tau': ','.join(map(str, entries)), 'value': function(entries, *extra)}


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleEstimate:
    """Mean of a statistic over a seeded uniform sample."""
    n: int
    sample_size: int
    seed: int
    statistic: str
    point_estimate: Optional[float]
    standard_error: Optional[float]
    accepted: int
    sigma: Optional[str] = None

    def to_dict(self) -> Dict:
        return {
            'n': self.n, 'sample_size': self.sample_size, 'seed': self.seed,
            'statistic': self.statistic, 'sigma': self.sigma, 'accepted': self.accepted,
            'point_estimate': self.point_estimate, 'standard_error': self.standard_error,
        }


def sample_statistic(n: int, sample_size: int, seed: int, statistic: str,
                     sigma: Optional[Permutation] = None, workers: int = 1,
                     chunk_size: int = DEFAULT_CHUNK_SIZE) -> SampleEstimate:
    """
    Estimate a statistic from sample_size uniform permutations of length n.

    mu-zero is conditioned on sigma <= tau: draws avoiding sigma are rejected
    and `accepted` counts the rest.

    Args:
        n: Permutation length (>= 2)
        sample_size: Number of draws
        seed: Master seed
        statistic: one of SAMPLE_STATISTICS
        sigma: Pattern for the sigma-dependent statistics
        workers: Worker processes
        chunk_size: Draws per generator stream

    Returns:
        SampleEstimate
    """
    if statistic not in SAMPLE_STATISTICS:
        raise PreconditionError(f"unknown sample statistic {statistic!r}; choose from {sorted(SAMPLE_STATISTICS)}")
    if n < 2 or sample_size < 1:
        raise PreconditionError(f"need n >= 2 and a positive sample size, got n={n}, size={sample_size}")
    function, extra = _resolve(SAMPLE_STATISTICS[statistic], sigma)

    raw = sample_values(n, sample_size, seed, function, extra, workers=workers, chunk_size=chunk_size)
    values = np.array([v for v in raw if v is not None], dtype=np.float64)
    accepted = int(values.size)
    mean = float(values.mean()) if accepted else None
    stderr = float(values.std(ddof=1) / np.sqrt(accepted)) if accepted > 1 else None

    estimate = SampleEstimate(n=n, sample_size=sample_size, seed=seed, statistic=statistic,
                              point_estimate=mean, standard_error=stderr, accepted=accepted,
                              sigma=str(sigma) if sigma is not None else None)
    logger.info(f"Sampled {statistic} at n={n}: {mean} +/- {stderr} ({accepted}/{sample_size} accepted)")
    return estimate


def sample_records(n: int, sample_size: int, seed: int, statistic: str,
                   sigma: Optional[Permutation] = None,
                   chunk_size: int = DEFAULT_CHUNK_SIZE) -> Iterator[Dict]:
    """One record per sampled tau, in the order sample_values draws them."""
    if n < 2 or sample_size < 1:
        raise PreconditionError(f"need n >= 2 and a positive sample size, got n={n}, size={sample_size}")
    function, extra = _resolve(statistic, sigma)
    for entries in iter_random_permutations(n, sample_size, seed, chunk_size):
        yield {'tau': ','.join(map(str, entries)), 'value': function(entries, *extra)}
