"""
Intervals [sigma, tau] of the consecutive pattern poset.

An interval is materialized from the windows of tau: every window whose
reduction contains sigma survives, and windows with equal reductions are
merged. The merged classes are the elements; covers come from dropping the
first or last entry of a window.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .errors import CapExceededError, InternalConsistencyError, InvalidChainError, NotComparableError
from .permutation import (
    Permutation, Window, contains_entries, is_monotone, occurrences, reduce_entries,
    window_patterns,
)
from ..utils.exporters import HasseFormatter, digraph
from ..utils.logging_config import get_logger


logger = get_logger('interval')

DEFAULT_MAX_CHAINS = 1_000_000


@dataclass(frozen=True, eq=False)
class Interval:
    """
    The interval [sigma, tau] as a ranked Hasse diagram.

    ranks[r] holds the elements of length |sigma| + r in ascending order;
    covers maps each element to the elements it covers (its children) and
    parents is the inverse relation.
    """
    sigma: Permutation
    tau: Permutation
    ranks: Tuple[Tuple[Permutation, ...], ...]
    covers: Mapping[Permutation, Tuple[Permutation, ...]]
    parents: Mapping[Permutation, Tuple[Permutation, ...]]
    window_classes: Mapping[Permutation, Tuple[Window, ...]]

    @property
    def length(self) -> int:
        """N = |tau| - |sigma|, the rank of the interval."""
        return len(self.tau) - len(self.sigma)

    @property
    def elements(self) -> List[Permutation]:
        """All elements, bottom rank first."""
        return [p for level in self.ranks for p in level]

    def __len__(self) -> int:
        return sum(len(level) for level in self.ranks)

    def __contains__(self, perm) -> bool:
        return perm in self.covers

    def rank_of(self, perm: Permutation) -> int:
        return len(perm) - len(self.sigma)

    def leq(self, a: Permutation, b: Permutation) -> bool:
        """a <= b inside the interval (consecutive containment)."""
        return a in self and b in self and contains_entries(a.entries, b.entries)

    def representative(self, perm: Permutation) -> Window:
        """Window of tau with the smallest left endpoint reducing to perm."""
        return self.window_classes[perm][0]

    def edges(self) -> List[Tuple[Permutation, Permutation]]:
        """Cover pairs (parent, child), top-down in rank order."""
        return [(p, c) for level in reversed(self.ranks) for p in level for c in self.covers[p]]


@dataclass(frozen=True)
class MaximalChain:
    """Saturated chain read top-down, from tau to sigma."""
    elements: Tuple[Permutation, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def edges(self) -> List[Tuple[Permutation, Permutation]]:
        return list(zip(self.elements, self.elements[1:]))

    def inner(self) -> FrozenSet[Permutation]:
        """The facet of the order complex: the chain minus its endpoints."""
        return frozenset(self.elements[1:-1])


@dataclass(frozen=True)
class ChainVerdict:
    """Result of the chain test with the evidence that decided it."""
    is_chain: bool
    reason: str
    occurrence: Optional[Window] = None


def build_interval(sigma: Permutation, tau: Permutation) -> Interval:
    """
    Materialize [sigma, tau].

    Windows are scanned from longest to shortest; a window survives if its
    reduction contains sigma, and survivors with equal reductions form one
    element whose first window (smallest left endpoint) represents it.

    Args:
        sigma: Bottom element
        tau: Top element

    Returns:
        Immutable Interval

    Raises:
        NotComparableError: sigma is not contained in tau
    """
    if not contains_entries(sigma.entries, tau.entries):
        raise NotComparableError(sigma, tau)

    n, k = len(tau), len(sigma)
    classes: Dict[Tuple[int, ...], List[Window]] = {}
    ranks = []
    for length in range(n, k - 1, -1):
        level = []
        for start, entries in enumerate(window_patterns(tau.entries, length), 1):
            if not contains_entries(sigma.entries, entries):
                continue
            if entries not in classes:
                classes[entries] = []
                level.append(entries)
            classes[entries].append(Window(start, start + length - 1))
        ranks.append(tuple(Permutation._trusted(e) for e in sorted(level)))
    ranks.reverse()

    covers = {}
    parents = {p: [] for level in ranks for p in level}
    for level in ranks[1:]:
        for perm in level:
            children = []
            for entries in (reduce_entries(perm.entries[1:]), reduce_entries(perm.entries[:-1])):
                child = Permutation._trusted(entries)
                if child in parents and child not in children:
                    children.append(child)
            children.sort()
            covers[perm] = tuple(children)
            for child in children:
                parents[child].append(perm)
    covers[ranks[0][0]] = ()

    interval = Interval(
        sigma=sigma,
        tau=tau,
        ranks=tuple(ranks),
        covers=covers,
        parents={p: tuple(sorted(ps)) for p, ps in parents.items()},
        window_classes={Permutation._trusted(e): tuple(ws) for e, ws in classes.items()},
    )
    logger.debug(f"Built [{sigma.compact()}, {tau.compact()}]: {len(interval)} elements, "
                 f"rank sizes {rank_sizes(interval)}")
    return interval


def _build_pair(pair: Tuple[Permutation, Permutation]) -> Interval:
    return build_interval(*pair)


def build_interval_batch(pairs: Sequence[Tuple[Permutation, Permutation]], workers: int = 1) -> List[Interval]:
    """Build many intervals, optionally across worker processes; order is preserved."""
    if workers <= 1 or len(pairs) < 2:
        return [build_interval(s, t) for s, t in pairs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_build_pair, pairs, chunksize=max(1, len(pairs) // (4 * workers))))


def rank_sizes(interval: Interval) -> Tuple[int, ...]:
    """a_0 .. a_N."""
    return tuple(len(level) for level in interval.ranks)


def is_chain(interval: Interval) -> ChainVerdict:
    """
    Decide whether [sigma, tau] is totally ordered.

    The combinatorial criterion (tau monotone, or sigma occurring exactly
    once and as a prefix or suffix) is cross-checked against the rank sizes.
    """
    sigma, tau = interval.sigma, interval.tau
    occ = occurrences(sigma, tau)
    if is_monotone(tau):
        verdict = ChainVerdict(True, 'monotone')
    elif len(occ) == 1 and (occ.windows[0].i == 1 or occ.windows[0].j == len(tau)):
        window = occ.windows[0]
        verdict = ChainVerdict(True, 'unique-prefix' if window.i == 1 else 'unique-suffix', window)
    elif len(occ) == 1:
        verdict = ChainVerdict(False, 'unique-inner-occurrence', occ.windows[0])
    else:
        verdict = ChainVerdict(False, 'multiple-occurrences', occ.windows[1])

    structural = all(size == 1 for size in rank_sizes(interval))
    if structural != verdict.is_chain:
        logger.error(f"Chain test disagrees with rank sizes on [{sigma}, {tau}]")
        raise InternalConsistencyError(f"chain criterion and rank sizes disagree for [{sigma}, {tau}]")
    return verdict


def is_product_of_two_chains(interval: Interval) -> Optional[Tuple[int, int]]:
    """
    Chain lengths (i, |tau| - j + 1) when sigma occurs exactly once, at [i, j].

    The grid isomorphism (a, b) -> tau_[i-a, j+b] is verified element by
    element and cover by cover.
    """
    sigma, tau = interval.sigma, interval.tau
    occ = occurrences(sigma, tau)
    if len(occ) != 1:
        return None
    i, j = occ.windows[0].i, occ.windows[0].j
    n = len(tau)
    rows, cols = i, n - j + 1

    grid = {}
    for a in range(rows):
        for b in range(cols):
            grid[(a, b)] = Permutation._trusted(reduce_entries(tau.entries[i - a - 1:j + b]))
    if len(set(grid.values())) != rows * cols or len(interval) != rows * cols:
        raise InternalConsistencyError(f"unique occurrence of {sigma} in {tau} does not give a grid")
    for (a, b), perm in grid.items():
        expected = set()
        if a > 0:
            expected.add(grid[(a - 1, b)])
        if b > 0:
            expected.add(grid[(a, b - 1)])
        if set(interval.covers[perm]) != expected:
            raise InternalConsistencyError(f"cover relation of {perm} breaks the grid shape")
    return rows, cols


def count_maximal_chains(interval: Interval) -> int:
    """Number of maximal chains, by a path count over the Hasse diagram."""
    paths = {interval.sigma: 1}
    for level in interval.ranks[1:]:
        for perm in level:
            paths[perm] = sum(paths[c] for c in interval.covers[perm])
    return paths[interval.tau]


def maximal_chains(interval: Interval, max_chains: int = DEFAULT_MAX_CHAINS) -> List[MaximalChain]:
    """
    All maximal chains, top-down, in lexicographic order of their elements.

    Raises:
        CapExceededError: more than max_chains chains
    """
    total = count_maximal_chains(interval)
    if total > max_chains:
        raise CapExceededError('maximal chains', total, max_chains)
    return [MaximalChain(tuple(path)) for path in saturated_chains_down(interval, interval.tau, interval.sigma)]


def saturated_chains_down(interval: Interval, top: Permutation, bottom: Permutation) -> List[List[Permutation]]:
    """All saturated chains from top down to bottom (inclusive)."""
    if top == bottom:
        return [[top]]
    stop = len(bottom)
    chains = []
    stack = [[top]]
    while stack:
        path = stack.pop()
        last = path[-1]
        if len(last) == stop:
            if last == bottom:
                chains.append(path)
            continue
        for child in reversed(interval.covers[last]):
            if len(child) == stop and child != bottom:
                continue
            if len(child) > stop and not contains_entries(bottom.entries, child.entries):
                continue
            stack.append(path + [child])
    return chains


def validate_chain(interval: Interval, elements: Sequence[Permutation]) -> MaximalChain:
    """Check that elements form a maximal chain of the interval, top-down."""
    chain = tuple(elements)
    if len(chain) != interval.length + 1 or chain[0] != interval.tau or chain[-1] != interval.sigma:
        raise InvalidChainError(f"not a maximal chain of [{interval.sigma}, {interval.tau}]")
    for upper, lower in zip(chain, chain[1:]):
        if upper not in interval or lower not in interval.covers[upper]:
            raise InvalidChainError(f"{upper} does not cover {lower} in the interval")
    return MaximalChain(chain)


def order_complex_facets(interval: Interval, max_chains: int = DEFAULT_MAX_CHAINS) -> List[FrozenSet[Permutation]]:
    """Facets of the order complex of the open interval; empty when N < 2."""
    if interval.length < 2:
        return []
    return [chain.inner() for chain in maximal_chains(interval, max_chains)]


def open_interval_graph(interval: Interval) -> nx.Graph:
    """Undirected Hasse diagram of the open interval (sigma, tau)."""
    graph = nx.Graph()
    inner = [p for level in interval.ranks[1:-1] for p in level]
    graph.add_nodes_from(inner)
    for perm in inner:
        for child in interval.covers[perm]:
            if child != interval.sigma:
                graph.add_edge(perm, child)
    return graph


def open_interval_components(interval: Interval) -> List[FrozenSet[Permutation]]:
    """Connected components of the open interval, ordered by their least element."""
    if interval.length < 2:
        return []
    components = [frozenset(c) for c in nx.connected_components(open_interval_graph(interval))]
    return sorted(components, key=lambda c: (len(min(c)), min(c)))


def is_criss_cross(interval: Interval) -> bool:
    """
    True when the interval has the criss-cross shape: two elements at every
    inner rank and any two elements of different ranks comparable.
    """
    sizes = rank_sizes(interval)
    if interval.length < 2 or any(size != 2 for size in sizes[1:-1]):
        return False
    inner = interval.ranks[1:-1]
    for r, lower in enumerate(inner):
        for upper in inner[r + 1:]:
            for a in lower:
                for b in upper:
                    if not contains_entries(a.entries, b.entries):
                        return False
    return True


def to_json_dict(interval: Interval, compact: bool = False) -> Dict:
    """{sigma, tau, ranks, covers} with covers as [child, parent] pairs."""
    def fmt(p: Permutation) -> str:
        return p.format(compact)

    return {
        'sigma': fmt(interval.sigma),
        'tau': fmt(interval.tau),
        'ranks': [[fmt(p) for p in level] for level in interval.ranks],
        'covers': [[fmt(c), fmt(p)] for p, c in reversed(interval.edges())],
    }


def to_dot(interval: Interval, edge_labels: Optional[Mapping[Tuple[Permutation, Permutation], str]] = None,
           compact: bool = False) -> str:
    """
    Hasse diagram as DOT, one node per element, edges pointing down.

    Args:
        interval: Interval to render
        edge_labels: optional (parent, child) -> label text
        compact: use digit-string node names

    Returns:
        DOT source
    """
    def fmt(p: Permutation) -> str:
        return p.format(compact)

    graph = {}
    for level in reversed(interval.ranks):
        for perm in level:
            graph[fmt(perm)] = [fmt(c) for c in interval.covers[perm]]
    labels = {(fmt(p), fmt(c)): text for (p, c), text in (edge_labels or {}).items()}
    return digraph(graph, HasseFormatter(labels), name='Interval')
