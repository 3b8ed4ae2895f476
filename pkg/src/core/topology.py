"""
Disconnectivity and shellability of intervals.

Covers straddle detection, the search for disconnected subintervals, the
chain-edge labelling with symbolic epsilon corrections, its verification on
every rooted subinterval, direct shelling checks of the order complex and
induced 2+2 detection.
"""

from dataclasses import dataclass
from functools import total_ordering
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .errors import CapExceededError, InternalConsistencyError, UndefinedOperationError
from .interval import (
    Interval, MaximalChain, count_maximal_chains, maximal_chains, open_interval_components,
    rank_sizes, saturated_chains_down, validate_chain,
)
from .permutation import (
    Permutation, Window, contains_entries, exterior_length_of, occurrence_starts, reduce_entries,
    window_patterns,
)
from ..utils.logging_config import get_logger


logger = get_logger('topology')

DEFAULT_MAX_CL_CHAINS = 500
DEFAULT_MAX_SHELLING_FACETS = 8


@total_ordering
@dataclass(frozen=True)
class ChainLabel:
    """
    The label base - eps_mult * epsilon for a fixed symbolic epsilon > 0.

    Ordering is exact: compare bases first, then a larger eps_mult is smaller.
    """
    base: int
    eps_mult: int = 0

    def __post_init__(self):
        if self.base not in (0, 1):
            raise ValueError(f"label base must be 0 or 1, got {self.base}")
        if self.eps_mult < 0 or (self.base == 0 and self.eps_mult != 0):
            raise ValueError(f"invalid epsilon multiple {self.eps_mult} for base {self.base}")

    def _key(self) -> Tuple[int, int]:
        return self.base, -self.eps_mult

    def __lt__(self, other: 'ChainLabel') -> bool:
        return self._key() < other._key()

    def is_zero(self) -> bool:
        return self.base == 0

    def __str__(self) -> str:
        if self.eps_mult == 0:
            return str(self.base)
        if self.eps_mult == 1:
            return f"{self.base}-e"
        return f"{self.base}-{self.eps_mult}e"


@dataclass(frozen=True)
class LabeledChain:
    """A maximal chain with its edge labels, both read top-down."""
    chain: MaximalChain
    labels: Tuple[ChainLabel, ...]

    def is_weakly_increasing(self) -> bool:
        return all(a <= b for a, b in zip(self.labels, self.labels[1:]))


@dataclass(frozen=True)
class DisconnectionWitness:
    """pi occurs at both ends of `window` in tau and nowhere else inside it."""
    pi: Permutation
    window: Window
    sub: Permutation

    @property
    def rank(self) -> int:
        return len(self.sub) - len(self.pi)

    def to_dict(self, compact: bool = False) -> Dict:
        return {'pi': self.pi.format(compact), 'window': self.window.to_list(),
                'sub': self.sub.format(compact)}


@dataclass(frozen=True)
class CLVerification:
    """Outcome of checking the labelling on every rooted subinterval."""
    verified: bool
    rooted_intervals_checked: int
    counterexample: Optional[Dict] = None


@dataclass(frozen=True)
class ShellingResult:
    """Whether the label-induced facet order shells, and whether any order does."""
    cl_order_is_shelling: bool
    shelling_exists: Optional[bool]
    order: Tuple[FrozenSet[Permutation], ...]


@dataclass(frozen=True)
class TwoPlusTwoVerdict:
    free: bool
    witness: Optional[Tuple[Permutation, Permutation, Permutation, Permutation]] = None


# ---------------------------------------------------------------------------
# Straddles and disconnected subintervals
# ---------------------------------------------------------------------------

def straddles_entries(sigma: Sequence[int], tau: Sequence[int]) -> bool:
    k, n = len(sigma), len(tau)
    if k >= n:
        return False
    return occurrence_starts(sigma, tau) == [1, n - k + 1]


def straddles(sigma: Permutation, tau: Permutation) -> bool:
    """True iff sigma occurs in tau exactly as its prefix and its suffix."""
    return straddles_entries(sigma.entries, tau.entries)


def is_disconnected(interval: Interval) -> bool:
    """
    Whether the open interval (sigma, tau) is disconnected.

    For rank >= 3 the straddle criterion is checked against the connected
    components of the open interval; rank 2 is disconnected exactly when it
    has two middle elements.
    """
    n = interval.length
    if n < 2:
        return False
    if n == 2:
        return rank_sizes(interval)[1] == 2

    by_straddle = straddles(interval.sigma, interval.tau)
    components = open_interval_components(interval)
    by_graph = len(components) >= 2
    if by_straddle != by_graph:
        logger.error(f"Straddle test and component count disagree on "
                     f"[{interval.sigma}, {interval.tau}]: {by_straddle} vs {len(components)} components")
        raise InternalConsistencyError(
            f"disconnectivity mismatch for [{interval.sigma}, {interval.tau}]")
    return by_straddle


def _witness_search(tau: Sequence[int], lower: Sequence[int]) -> Optional[Tuple[Tuple[int, ...], int, int]]:
    """
    First (pi, i, j) with pi >= lower and two adjacent occurrences of pi in
    tau starting at i and j - |pi| + 1, offset by at least 3.

    Patterns are visited by length, then by their first occurrence.
    """
    n = len(tau)
    for length in range(len(lower), n - 2):
        starts_by_pattern: Dict[Tuple[int, ...], List[int]] = {}
        for start, entries in enumerate(window_patterns(tau, length), 1):
            if entries in starts_by_pattern:
                starts_by_pattern[entries].append(start)
            elif contains_entries(lower, entries):
                starts_by_pattern[entries] = [start]
        for entries, starts in starts_by_pattern.items():
            for a, b in zip(starts, starts[1:]):
                if b - a >= 3:
                    return entries, a, b + length - 1
    return None


def _search_floor(sigma: Sequence[int], tau: Sequence[int], optimized: bool) -> Sequence[int]:
    """Lower end of the search: x(tau) when sigma = 1 and |x(tau)| != 2."""
    if optimized and len(sigma) == 1 and len(tau) >= 2:
        x_len = exterior_length_of(tau)
        if x_len != 2:
            return reduce_entries(tau[:x_len])
    return sigma


def find_disconnected_subinterval(interval: Interval, optimized: bool = False) -> Optional[DisconnectionWitness]:
    """
    A disconnected subinterval [pi, tau_[i,j]] of rank >= 3, or None.

    Args:
        interval: Interval to search
        optimized: for sigma = 1 with |x(tau)| != 2 only search pi >= x(tau)

    Returns:
        DisconnectionWitness or None
    """
    return find_witness(interval.sigma.entries, interval.tau.entries, optimized)


def find_witness(sigma: Sequence[int], tau: Sequence[int], optimized: bool = False) -> Optional[DisconnectionWitness]:
    """Witness search straight from entries (used by the sampling loops)."""
    found = _witness_search(tau, _search_floor(sigma, tau, optimized))
    if found is None:
        return None
    entries, i, j = found
    return DisconnectionWitness(
        pi=Permutation._trusted(entries),
        window=Window(i, j),
        sub=Permutation._trusted(reduce_entries(tau[i - 1:j])),
    )


def has_disconnected_subinterval(sigma: Sequence[int], tau: Sequence[int]) -> bool:
    """Existence only; takes the optimized path whenever it applies."""
    return find_witness(sigma, tau, optimized=True) is not None


def is_shellable(interval: Interval) -> bool:
    """Shellable iff no disconnected subinterval of rank >= 3 exists."""
    return find_disconnected_subinterval(interval, optimized=True) is None


# ---------------------------------------------------------------------------
# Chain-edge labelling
# ---------------------------------------------------------------------------

def label_saturated_chain(elements: Sequence[Permutation]) -> Tuple[ChainLabel, ...]:
    """
    Labels of a saturated chain read top-down from tau.

    First pass: an edge is 0 when the lower element is the upper one with its
    first entry deleted (monotone elements count as such), 1 otherwise.
    Second pass, top-down: at pi'' -> pi' -> pi with pi straddling pi'' and
    the two labels not both 0, the lower label becomes the upper one minus
    epsilon.
    """
    labels = []
    for upper, lower in zip(elements, elements[1:]):
        left = reduce_entries(upper.entries[1:]) == lower.entries
        labels.append(ChainLabel(0) if left else ChainLabel(1))

    for t in range(1, len(labels)):
        top, bottom = elements[t - 1], elements[t + 1]
        upper_label, lower_label = labels[t - 1], labels[t]
        if upper_label.is_zero() and lower_label.is_zero():
            continue
        if straddles_entries(bottom.entries, top.entries):
            labels[t] = ChainLabel(upper_label.base, upper_label.eps_mult + 1)
    return tuple(labels)


def cl_labels(interval: Interval, chain: MaximalChain) -> LabeledChain:
    """
    Label a maximal chain of the interval.

    Raises:
        InvalidChainError: chain is not a maximal chain of the interval
    """
    chain = validate_chain(interval, chain.elements)
    return LabeledChain(chain=chain, labels=label_saturated_chain(chain.elements))


def edge_label_sets(interval: Interval, max_chains: int = DEFAULT_MAX_CL_CHAINS) -> Dict[Tuple[Permutation, Permutation], str]:
    """Every label an edge receives over all maximal chains, as DOT text."""
    seen: Dict[Tuple[Permutation, Permutation], Set[ChainLabel]] = {}
    for chain in maximal_chains(interval, max_chains):
        for edge, label in zip(chain.edges(), label_saturated_chain(chain.elements)):
            seen.setdefault(edge, set()).add(label)
    return {edge: ','.join(str(label) for label in sorted(labels)) for edge, labels in seen.items()}


def _rooted_check(sequences: List[Tuple[ChainLabel, ...]]) -> Tuple[bool, int]:
    increasing = [s for s in sequences if all(a <= b for a, b in zip(s, s[1:]))]
    if len(increasing) != 1:
        return False, len(increasing)
    winner = increasing[0]
    others = list(sequences)
    others.remove(winner)
    return all(winner < other for other in others), 1


def verify_dual_cl(interval: Interval, max_chains: int = DEFAULT_MAX_CL_CHAINS) -> CLVerification:
    """
    Check the labelling on every rooted subinterval [alpha, beta]_r.

    Each maximal chain of [alpha, beta] is labelled as a continuation of the
    root r (a saturated chain from tau down to beta). Exactly one of them
    must be weakly increasing, and it must come strictly first
    lexicographically.

    Raises:
        CapExceededError: the interval has more than max_chains maximal chains
    """
    total = count_maximal_chains(interval)
    if total > max_chains:
        raise CapExceededError('maximal chains for label verification', total, max_chains)

    checked = 0
    elements = interval.elements
    for beta in reversed(elements):
        roots = saturated_chains_down(interval, interval.tau, beta)
        below = [a for a in elements if len(a) < len(beta) and contains_entries(a.entries, beta.entries)]
        for alpha in below:
            downs = saturated_chains_down(interval, beta, alpha)
            for root in roots:
                offset = len(root) - 1
                sequences = [label_saturated_chain(root + down[1:])[offset:] for down in downs]
                checked += 1
                ok, increasing = _rooted_check(sequences)
                if not ok:
                    counterexample = {
                        'alpha': str(alpha), 'beta': str(beta),
                        'root': [str(p) for p in root],
                        'increasing_chains': increasing,
                    }
                    logger.debug(f"Labelling fails on rooted interval {counterexample}")
                    return CLVerification(False, checked, counterexample)
    return CLVerification(True, checked)


# ---------------------------------------------------------------------------
# Shellings of the order complex
# ---------------------------------------------------------------------------

def _extends_shelling(previous: Sequence[FrozenSet], facet: FrozenSet) -> bool:
    """
    The facet meets the union of the previous ones in a pure codimension-one
    complex: every F_j cap F sits inside some F_i cap F with |F minus F_i| = 1.
    """
    if not previous:
        return True
    maximal = [prev & facet for prev in previous if len(facet - prev) == 1]
    return all(any((prev & facet) <= m for m in maximal) for prev in previous)


def is_shelling_order(facets: Sequence[FrozenSet]) -> bool:
    return all(_extends_shelling(facets[:k], facets[k]) for k in range(1, len(facets)))


def _search_shelling(facets: List[FrozenSet]) -> Optional[List[FrozenSet]]:
    """Backtracking over facet orders."""
    order: List[FrozenSet] = []
    used = [False] * len(facets)

    def extend() -> bool:
        if len(order) == len(facets):
            return True
        for idx, facet in enumerate(facets):
            if used[idx] or not _extends_shelling(order, facet):
                continue
            used[idx] = True
            order.append(facet)
            if extend():
                return True
            order.pop()
            used[idx] = False
        return False

    return list(order) if extend() else None


def cl_facet_order(interval: Interval, max_chains: int = DEFAULT_MAX_CL_CHAINS) -> List[FrozenSet[Permutation]]:
    """Facets sorted by the label sequences of their chains (ties by elements)."""
    chains = maximal_chains(interval, max_chains)
    keyed = sorted(chains, key=lambda c: (label_saturated_chain(c.elements), c.elements))
    return [c.inner() for c in keyed]


def verify_shelling_order(interval: Interval, max_chains: int = DEFAULT_MAX_CL_CHAINS) -> bool:
    """True when the label-induced facet order is a shelling."""
    if interval.length < 2:
        return True
    return is_shelling_order(cl_facet_order(interval, max_chains))


def find_shelling(interval: Interval, max_chains: int = DEFAULT_MAX_CL_CHAINS,
                  max_facets: int = DEFAULT_MAX_SHELLING_FACETS) -> ShellingResult:
    """
    Label-induced order, falling back to exhaustive search on small complexes.

    shelling_exists is None when the label order fails and there are more
    than max_facets facets.
    """
    if interval.length < 2:
        return ShellingResult(True, True, ())
    order = cl_facet_order(interval, max_chains)
    if is_shelling_order(order):
        return ShellingResult(True, True, tuple(order))
    if len(order) > max_facets:
        logger.warning(f"Label order is not a shelling and {len(order)} facets exceed "
                       f"the exhaustive cap {max_facets}")
        return ShellingResult(False, None, tuple(order))
    found = _search_shelling(order)
    return ShellingResult(False, found is not None, tuple(found or order))


# ---------------------------------------------------------------------------
# Induced 2+2
# ---------------------------------------------------------------------------

def is_induced_two_plus_two(interval: Interval, a: Permutation, b: Permutation,
                            c: Permutation, d: Permutation) -> bool:
    """a < b and c < d with no comparabilities between {a, b} and {c, d}."""
    def lt(x, y):
        return len(x) < len(y) and contains_entries(x.entries, y.entries)

    def comparable(x, y):
        return x == y or lt(x, y) or lt(y, x)

    if not all(p in interval for p in (a, b, c, d)):
        raise UndefinedOperationError("all four elements must belong to the interval")
    if not (lt(a, b) and lt(c, d)):
        return False
    return not any(comparable(x, y) for x in (a, b) for y in (c, d))


def is_two_plus_two_free(interval: Interval) -> TwoPlusTwoVerdict:
    """Scan pairs of comparable pairs for an induced 2+2."""
    elements = interval.elements
    index = {p: t for t, p in enumerate(elements)}
    size = len(elements)
    comparable = [[False] * size for _ in range(size)]
    pairs = []
    for x in elements:
        for y in elements:
            if x == y:
                comparable[index[x]][index[y]] = True
            elif len(x) < len(y) and contains_entries(x.entries, y.entries):
                comparable[index[x]][index[y]] = comparable[index[y]][index[x]] = True
                pairs.append((x, y))

    for t, (a, b) in enumerate(pairs):
        ia, ib = index[a], index[b]
        for c, d in pairs[t + 1:]:
            ic, id_ = index[c], index[d]
            if comparable[ia][ic] or comparable[ia][id_] or comparable[ib][ic] or comparable[ib][id_]:
                continue
            return TwoPlusTwoVerdict(False, (a, b, c, d))
    return TwoPlusTwoVerdict(True)
