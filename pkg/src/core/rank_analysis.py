"""
Rank-level structure of intervals: breaking rank, unimodality, the
rank-raising injection, rank-intersecting chain families, Sperner checks
against a brute-force k-family oracle, and the lattice test.
"""

from dataclasses import dataclass
from math import factorial
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .enumeration import check_exhaustive, parallel_fold
from .errors import CapExceededError, InternalConsistencyError, PreconditionError
from .interval import Interval, build_interval, rank_sizes
from .permutation import Permutation, contains_entries, reduce_entries
from ..utils.logging_config import get_logger


logger = get_logger('rank_analysis')

DEFAULT_MAX_ORACLE_ELEMENTS = 22


@dataclass(frozen=True)
class RankProfile:
    sizes: Tuple[int, ...]
    breaking_rank: int
    peak_rank: int

    def to_dict(self) -> Dict:
        return {'sizes': list(self.sizes), 'breaking_rank': self.breaking_rank, 'peak_rank': self.peak_rank}


@dataclass(frozen=True)
class ChainFamily:
    """Disjoint chains (bottom-up) each meeting every rank in spanned_ranks once."""
    chains: Tuple[Tuple[Permutation, ...], ...]
    spanned_ranks: Tuple[int, int]

    def to_dict(self, compact: bool = False) -> Dict:
        return {
            'spanned_ranks': list(self.spanned_ranks),
            'chains': [[p.format(compact) for p in chain] for chain in self.chains],
        }


@dataclass(frozen=True)
class SpernerVerdict:
    strongly_sperner: bool
    method: str
    flagged: bool = False

    def to_dict(self) -> Dict:
        return {'value': self.strongly_sperner, 'method': self.method, 'flagged': self.flagged}


def breaking_rank(sizes: Sequence[int]) -> int:
    """Largest r with a_r < N + 1 - r, or -1 when every rank is full."""
    n = len(sizes) - 1
    below = [r for r, size in enumerate(sizes) if size < n + 1 - r]
    return max(below) if below else -1


def rank_profile(interval: Interval) -> RankProfile:
    sizes = rank_sizes(interval)
    return RankProfile(sizes=sizes, breaking_rank=breaking_rank(sizes), peak_rank=sizes.index(max(sizes)))


def is_unimodal(sizes: Sequence[int]) -> bool:
    peak = sizes.index(max(sizes))
    rising = all(sizes[r] <= sizes[r + 1] for r in range(peak))
    falling = all(sizes[r] >= sizes[r + 1] for r in range(peak, len(sizes) - 1))
    return rising and falling


def is_rank_unimodal(interval: Interval) -> bool:
    """Rank sizes weakly increase to a peak and then weakly decrease."""
    return is_unimodal(rank_sizes(interval))


# ---------------------------------------------------------------------------
# Injection and chain families
# ---------------------------------------------------------------------------

def rank_injection(interval: Interval, r: int, subset: Sequence[Permutation],
                   k: Optional[int] = None) -> Dict[Permutation, Permutation]:
    """
    Injective, order-increasing map from subset (rank r) into rank r + 1.

    Each element is represented by its leftmost window [i, i+s]. With k a
    left endpoint not used by the subset, windows left of k grow to the
    right ([i, i+s+1]) and windows right of k grow to the left ([i-1, i+s]).

    Args:
        interval: Interval
        r: Rank of the subset
        subset: Elements of rank r, at most min(a_r, N - r) of them
        k: Free left endpoint (smallest free one by default)

    Returns:
        element -> image

    Raises:
        PreconditionError: subset too large, off-rank, or k not free
    """
    subset = list(dict.fromkeys(subset))
    if not subset:
        return {}
    if not 0 <= r < interval.length:
        raise PreconditionError(f"rank {r} has no rank above it in an interval of length {interval.length}")
    sizes = rank_sizes(interval)
    limit = min(sizes[r], interval.length - r)
    if len(subset) > limit:
        raise PreconditionError(f"{len(subset)} elements exceed min(a_r, N - r) = {limit}")
    level = set(interval.ranks[r])
    for perm in subset:
        if perm not in level:
            raise PreconditionError(f"{perm} is not an element of rank {r}")

    tau = interval.tau.entries
    n = len(tau)
    s = len(interval.sigma) + r - 1
    starts = {perm: interval.representative(perm).i for perm in subset}
    free = [c for c in range(1, n - s + 1) if c not in set(starts.values())]
    if k is None:
        k = free[0]
    elif k not in free:
        raise PreconditionError(f"k={k} is not a free left endpoint (choices: {free})")

    mapping = {}
    for perm, i in starts.items():
        window = (i, i + s + 1) if i < k else (i - 1, i + s)
        mapping[perm] = Permutation._trusted(reduce_entries(tau[window[0] - 1:window[1]]))

    images = list(mapping.values())
    if len(set(images)) != len(images) or not all(
            contains_entries(p.entries, q.entries) for p, q in mapping.items()):
        logger.error(f"Rank injection at rank {r} with k={k} failed on [{interval.sigma}, {interval.tau}]")
        raise InternalConsistencyError(f"rank injection is not injective and increasing at rank {r}")
    return mapping


def select_rank_window(sizes: Sequence[int], i: int) -> Tuple[int, int]:
    """
    Consecutive ranks [r1, r2] holding the i largest rank levels, with the
    smallest of them at an end.
    """
    target = sum(sorted(sizes, reverse=True)[:i])
    for r1 in range(len(sizes) - i + 1):
        window = sizes[r1:r1 + i]
        if sum(window) == target and min(window) in (window[0], window[-1]):
            return r1, r1 + i - 1
    raise InternalConsistencyError(f"no consecutive window of the {i} largest ranks in {tuple(sizes)}")


def rank_intersecting_chains(interval: Interval, i: int) -> ChainFamily:
    """
    l_i disjoint chains meeting each of the i largest rank levels.

    Chains start from the first l_i elements of the lowest selected rank and
    are pushed upward by repeated rank injections.
    """
    sizes = rank_sizes(interval)
    if not 1 <= i <= len(sizes):
        raise PreconditionError(f"i must lie in 1..{len(sizes)}, got {i}")
    r1, r2 = select_rank_window(sizes, i)
    width = min(sizes[r1:r2 + 1])

    chains = [[perm] for perm in interval.ranks[r1][:width]]
    for r in range(r1, r2):
        step = rank_injection(interval, r, [chain[-1] for chain in chains])
        for chain in chains:
            chain.append(step[chain[-1]])
    return ChainFamily(chains=tuple(tuple(c) for c in chains), spanned_ranks=(r1, r2))


# ---------------------------------------------------------------------------
# k-family oracle
# ---------------------------------------------------------------------------

def _strictly_below(elements: Sequence[Permutation]) -> List[List[int]]:
    return [[j for j in range(t) if len(elements[j]) < len(elements[t])
             and contains_entries(elements[j].entries, elements[t].entries)]
            for t in range(len(elements))]


def _k_family_search(interval: Interval, k: int, collect: bool):
    """
    Branch and bound over elements in rank order.

    heights[t] is the longest chain of chosen elements ending at t (0 when t
    is not chosen); an element may join while that stays <= k. The k
    largest rank levels seed the bound.
    """
    elements = interval.elements
    m = len(elements)
    below = _strictly_below(elements)
    heights = [0] * m
    chosen: List[int] = []
    best = sum(sorted(rank_sizes(interval), reverse=True)[:k])
    found: List[FrozenSet[Permutation]] = []

    def visit(t: int, size: int) -> None:
        nonlocal best, found
        if t == m:
            if size > best:
                best = size
                found = []
            if collect and size == best:
                found.append(frozenset(elements[c] for c in chosen))
            return
        if size + (m - t) < best or (not collect and size + (m - t) == best):
            return
        height = 1 + max((heights[j] for j in below[t]), default=0)
        if height <= k:
            heights[t] = height
            chosen.append(t)
            visit(t + 1, size + 1)
            chosen.pop()
            heights[t] = 0
        visit(t + 1, size)

    visit(0, 0)
    return best, found


def _check_oracle_cap(interval: Interval, max_elements: int) -> None:
    if len(interval) > max_elements:
        raise CapExceededError('k-family oracle elements', len(interval), max_elements)


def max_k_family_oracle(interval: Interval, k: int, max_elements: int = DEFAULT_MAX_ORACLE_ELEMENTS) -> int:
    """
    Size of the largest subset with no chain of k + 1 elements.

    Raises:
        CapExceededError: interval has more than max_elements elements
    """
    if k < 1:
        raise PreconditionError(f"k must be positive, got {k}")
    if k >= interval.length + 1:
        return len(interval)
    _check_oracle_cap(interval, max_elements)
    best, _ = _k_family_search(interval, k, collect=False)
    return best


def max_antichains(interval: Interval, max_elements: int = DEFAULT_MAX_ORACLE_ELEMENTS) -> List[FrozenSet[Permutation]]:
    """Every antichain of maximum size."""
    _check_oracle_cap(interval, max_elements)
    _, found = _k_family_search(interval, 1, collect=True)
    return sorted(found, key=lambda a: sorted(a))


def _constructive_route(interval: Interval) -> bool:
    try:
        for i in range(1, interval.length + 2):
            rank_intersecting_chains(interval, i)
    except (InternalConsistencyError, PreconditionError) as e:
        logger.warning(f"Chain construction failed on [{interval.sigma}, {interval.tau}]: {e}")
        return False
    return True


def is_strongly_sperner(interval: Interval, max_elements: int = DEFAULT_MAX_ORACLE_ELEMENTS) -> SpernerVerdict:
    """
    Strong Sperner property.

    Within the oracle cap every k is checked against the brute-force
    k-family size; above it only the chain construction (valid for
    unimodal intervals) is run and the verdict is flagged.
    """
    sizes = sorted(rank_sizes(interval), reverse=True)
    constructive = _constructive_route(interval) and is_rank_unimodal(interval)
    if len(interval) > max_elements:
        logger.warning(f"[{interval.sigma}, {interval.tau}] has {len(interval)} elements; "
                       f"strong Sperner verdict is constructive only")
        return SpernerVerdict(constructive, 'constructive', flagged=True)

    for k in range(1, interval.length + 2):
        if max_k_family_oracle(interval, k, max_elements) != sum(sizes[:k]):
            return SpernerVerdict(False, 'oracle')
    if not constructive:
        raise InternalConsistencyError(
            f"oracle and chain construction disagree on [{interval.sigma}, {interval.tau}]")
    return SpernerVerdict(True, 'oracle')


def is_strictly_sperner(interval: Interval, max_elements: int = DEFAULT_MAX_ORACLE_ELEMENTS) -> bool:
    """Every maximum antichain is a whole rank level."""
    levels = {frozenset(level) for level in interval.ranks}
    return all(antichain in levels for antichain in max_antichains(interval, max_elements))


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------

def is_lattice(interval: Interval) -> bool:
    """Every pair has a least upper bound and a greatest lower bound."""
    elements = interval.elements
    m = len(elements)
    leq = [[a == b or (len(a) < len(b) and contains_entries(a.entries, b.entries)) for b in elements]
           for a in elements]
    ups = [[y for y in range(m) if leq[x][y]] for x in range(m)]
    downs = [[y for y in range(m) if leq[y][x]] for x in range(m)]

    for a in range(m):
        for b in range(a + 1, m):
            if leq[a][b] or leq[b][a]:
                continue
            upper = set(ups[a]).intersection(ups[b])
            if not any(all(leq[u][v] for v in upper) for u in upper):
                return False
            lower = set(downs[a]).intersection(downs[b])
            if not any(all(leq[v][u] for v in lower) for u in lower):
                return False
    return True


def lattice_indicator(tau: Tuple[int, ...], sigma: Tuple[int, ...]) -> Optional[bool]:
    """Lattice verdict for [sigma, tau], None when sigma is not contained in tau."""
    if not contains_entries(sigma, tau):
        return None
    return is_lattice(build_interval(Permutation._trusted(sigma), Permutation._trusted(tau)))


def lattice_census(n: int, sigma: Permutation, workers: int = 1, max_n: int = 10) -> Dict[str, int]:
    """
    How many intervals [sigma, tau], tau in S_n, are lattices.

    Returns:
        {'lattice', 'not_lattice', 'not_comparable'} counts
    """
    check_exhaustive(n, max_n)
    counts = parallel_fold(n, lattice_indicator, (sigma.entries,), workers=workers)
    comparable = sum(counts.values())
    summary = {
        'lattice': counts.get(True, 0),
        'not_lattice': counts.get(False, 0),
        'not_comparable': factorial(n) - comparable,
    }
    logger.info(f"Lattice census n={n} sigma={sigma}: {summary}")
    return summary
