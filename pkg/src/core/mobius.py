"""
Möbius function of the consecutive pattern poset.

`mobius_recursive` follows the exterior recursion, which only ever looks at
tau, x(tau), x(x(tau)), ...; `mobius_oracle` computes the same value from
the definition over the materialized interval and is used to cross-check it.
"""

from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, Optional, Tuple

from .errors import CapExceededError, NotComparableError, UndefinedOperationError
from .interval import build_interval
from .permutation import (
    Permutation, contains, contains_entries, exterior, interior, is_monotone, occurrence_starts,
)
from ..utils.logging_config import get_logger


logger = get_logger('mobius')

DEFAULT_MAX_ELEMENTS = 20_000


class MobiusBranch(Enum):
    """Case of the exterior recursion that decided the value."""
    RECURSIVE_CARRIER = 'recursive-carrier'
    RANK2_NONMONOTONE = 'rank2-nonmonotone'
    SMALL_RANK = 'small-rank'
    ZERO = 'zero'


@dataclass(frozen=True)
class MobiusResult:
    """Value of mu(sigma, tau) with the case that fired first."""
    value: int
    branch: MobiusBranch
    recursion_trace: Optional[Tuple[Tuple[Permutation, Permutation], ...]] = None

    def to_dict(self, compact: bool = False) -> Dict:
        data = {'value': self.value, 'branch': self.branch.value}
        if self.recursion_trace is not None:
            data['trace'] = [[s.format(compact), t.format(compact)] for s, t in self.recursion_trace]
        return data


def _step(sigma: Permutation, tau: Permutation):
    """One application of the recursion: (branch, value or None, next tau or None)."""
    d = len(tau) - len(sigma)
    if d < 2:
        return MobiusBranch.SMALL_RANK, (-1) ** d, None
    if d == 2:
        if not is_monotone(tau) and sigma in (interior(tau), exterior(tau)):
            return MobiusBranch.RANK2_NONMONOTONE, 1, None
        return MobiusBranch.ZERO, 0, None
    x = exterior(tau)
    if contains(sigma, x) and not contains(x, interior(tau)):
        return MobiusBranch.RECURSIVE_CARRIER, None, x
    return MobiusBranch.ZERO, 0, None


@lru_cache(maxsize=65536)
def _mobius_cached(sigma: Permutation, tau: Permutation) -> MobiusResult:
    trace = [(sigma, tau)]
    first_branch, value, nxt = _step(sigma, tau)
    while value is None:
        trace.append((sigma, nxt))
        _, value, nxt = _step(sigma, nxt)
    return MobiusResult(value=value, branch=first_branch, recursion_trace=tuple(trace))


def mobius_recursive(sigma: Permutation, tau: Permutation, trace: bool = False) -> MobiusResult:
    """
    mu(sigma, tau) by the exterior recursion.

    Args:
        sigma: Lower permutation
        tau: Upper permutation
        trace: keep the visited (sigma, tau') pairs

    Returns:
        MobiusResult

    Raises:
        NotComparableError: sigma is not contained in tau
    """
    if not contains(sigma, tau):
        raise NotComparableError(sigma, tau)
    result = _mobius_cached(sigma, tau)
    return result if trace else replace(result, recursion_trace=None)


def mobius_oracle(sigma: Permutation, tau: Permutation, max_elements: int = DEFAULT_MAX_ELEMENTS) -> int:
    """
    mu(sigma, tau) from sum_{sigma <= pi <= rho} mu(sigma, pi) = [rho = sigma].

    One bottom-up pass over the interval; down-sets are assembled from the
    children's down-sets.

    Raises:
        NotComparableError: sigma is not contained in tau
        CapExceededError: interval larger than max_elements
    """
    interval = build_interval(sigma, tau)
    if len(interval) > max_elements:
        raise CapExceededError('interval elements', len(interval), max_elements)

    mu = {sigma: 1}
    below: Dict[Permutation, FrozenSet[Permutation]] = {sigma: frozenset()}
    for level in interval.ranks[1:]:
        for rho in level:
            strictly_below = set()
            for child in interval.covers[rho]:
                strictly_below.add(child)
                strictly_below.update(below[child])
            below[rho] = frozenset(strictly_below)
            mu[rho] = -sum(mu[pi] for pi in strictly_below)
    return mu[tau]


def has_carrier_element(tau: Permutation) -> bool:
    """True iff x(tau) is not contained in i(tau)."""
    if len(tau) < 3:
        raise UndefinedOperationError("carrier elements need length >= 3")
    return not contains(exterior(tau), interior(tau))


def carrier_of_interval(sigma: Permutation, tau: Permutation) -> Optional[Permutation]:
    """x(tau) when sigma <= x(tau) and x(tau) is not contained in i(tau), else None."""
    if len(tau) < 3:
        return None
    x = exterior(tau)
    if contains(sigma, x) and not contains(x, interior(tau)):
        return x
    return None


def mobius_zero_sufficient(sigma: Permutation, tau: Permutation) -> bool:
    """
    True when neither of the first two entries of tau lies in an occurrence
    of sigma (every occurrence starts at position 3 or later); mu is then 0.
    """
    if not contains_entries(sigma.entries, tau.entries):
        raise NotComparableError(sigma, tau)
    return min(occurrence_starts(sigma.entries, tau.entries)) >= 3


def mobius_cache_clear() -> None:
    _mobius_cached.cache_clear()
