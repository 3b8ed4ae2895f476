"""
Permutations and single-permutation operations for the consecutive pattern
poset: reduction, occurrences, containment, prefixes/suffixes/bifixes,
exterior/interior, symmetries and sums.

Positions and windows are 1-based throughout, matching the usual notation
tau_[i,j] for the reduction of tau_i ... tau_j.
"""

from bisect import bisect_left, insort
from dataclasses import dataclass
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .errors import CapacityError, InvalidPermutationError, UndefinedOperationError


MAX_PERMUTATION_LENGTH = 64


def _argsort(seq: Sequence[int]) -> List[int]:
    """Positions of seq sorted by value; equal argsorts <=> equal reductions."""
    return sorted(range(len(seq)), key=seq.__getitem__)


def reduce_entries(word: Sequence[int]) -> Tuple[int, ...]:
    """Reduce a word of distinct integers (no validation)."""
    out = [0] * len(word)
    for rank, position in enumerate(_argsort(word), 1):
        out[position] = rank
    return tuple(out)


def reduce_by_counting(word: Sequence[int]) -> Tuple[int, ...]:
    """Reduction by comparison counting: entry x becomes 1 + #{y < x}."""
    return tuple(1 + sum(1 for y in word if y < x) for x in word)


def window_patterns(entries: Sequence[int], length: int) -> List[Tuple[int, ...]]:
    """
    Reductions of all windows of a given length, left to right.

    Slides a sorted copy of the window so each rank is a binary search
    instead of a full re-sort.
    """
    n = len(entries)
    if length < 1 or length > n:
        return []
    window_sorted = sorted(entries[:length])
    patterns = []
    for start in range(n - length + 1):
        if start:
            del window_sorted[bisect_left(window_sorted, entries[start - 1])]
            insort(window_sorted, entries[start + length - 1])
        patterns.append(tuple(bisect_left(window_sorted, v) + 1
                              for v in entries[start:start + length]))
    return patterns


def _validate_entries(entries: Tuple[int, ...], max_length: int) -> None:
    n = len(entries)
    if n == 0:
        raise InvalidPermutationError("a permutation needs at least one entry")
    if n > max_length:
        raise CapacityError(f"permutation length {n} exceeds capacity {max_length}")
    if sorted(entries) != list(range(1, n + 1)):
        raise InvalidPermutationError(f"entries {entries} are not a permutation of 1..{n}")


@dataclass(frozen=True, order=True)
class Permutation:
    """A permutation of 1..n in one-line notation, always stored reduced."""
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        if any(isinstance(v, bool) or not isinstance(v, int) for v in entries):
            raise InvalidPermutationError(f"entries must be integers: {self.entries!r}")
        _validate_entries(entries, MAX_PERMUTATION_LENGTH)
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def _trusted(cls, entries: Tuple[int, ...]) -> 'Permutation':
        """Wrap entries already known to be a reduced permutation."""
        perm = object.__new__(cls)
        object.__setattr__(perm, 'entries', entries)
        return perm

    @classmethod
    def parse(cls, text: str, max_length: Optional[int] = None) -> 'Permutation':
        """
        Parse '2,1,3,5,4,6' or, for n <= 9, the compact form '213546'.

        Args:
            text: Permutation text
            max_length: Capacity to enforce (defaults to MAX_PERMUTATION_LENGTH)

        Returns:
            Permutation (the text must already be a permutation of 1..n)
        """
        cleaned = text.strip()
        if not cleaned:
            raise InvalidPermutationError("empty permutation text")
        try:
            if ',' in cleaned:
                entries = tuple(int(part) for part in cleaned.split(','))
            elif cleaned.isdigit():
                entries = tuple(int(ch) for ch in cleaned)
                if len(entries) > 9:
                    raise InvalidPermutationError(
                        f"compact form only supports n <= 9, use commas: {text!r}")
            else:
                raise InvalidPermutationError(f"cannot parse permutation {text!r}")
        except ValueError as e:
            if isinstance(e, InvalidPermutationError):
                raise
            raise InvalidPermutationError(f"cannot parse permutation {text!r}")
        limit = MAX_PERMUTATION_LENGTH if max_length is None else min(max_length, MAX_PERMUTATION_LENGTH)
        _validate_entries(entries, limit)
        return cls._trusted(entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __str__(self) -> str:
        return ','.join(str(v) for v in self.entries)

    def __repr__(self) -> str:
        return f"Permutation({self.compact() if len(self) <= 9 else str(self)})"

    def compact(self) -> str:
        """Digit-string form; only unambiguous for n <= 9."""
        if len(self) > 9:
            return str(self)
        return ''.join(str(v) for v in self.entries)

    def format(self, compact: bool = False) -> str:
        return self.compact() if compact else str(self)

    def window(self, i: int, j: int) -> 'Permutation':
        """tau_[i,j]: reduction of entries i..j (1-based, inclusive)."""
        if not 1 <= i <= j <= len(self):
            raise InvalidPermutationError(f"window [{i},{j}] out of range for length {len(self)}")
        return Permutation._trusted(reduce_entries(self.entries[i - 1:j]))


@dataclass(frozen=True, order=True)
class Window:
    """Consecutive index range [i, j] of a host permutation (1-based)."""
    i: int
    j: int

    def __post_init__(self):
        if not 1 <= self.i <= self.j:
            raise InvalidPermutationError(f"invalid window [{self.i},{self.j}]")

    @property
    def length(self) -> int:
        return self.j - self.i + 1

    def __str__(self) -> str:
        return f"[{self.i},{self.j}]"

    def to_list(self) -> List[int]:
        return [self.i, self.j]


@dataclass(frozen=True)
class OccurrenceList:
    """All occurrences of a pattern in a host, ascending by start."""
    pattern: Permutation
    host: Permutation
    windows: Tuple[Window, ...]

    def __len__(self) -> int:
        return len(self.windows)

    def __iter__(self) -> Iterator[Window]:
        return iter(self.windows)

    def __bool__(self) -> bool:
        return bool(self.windows)

    @property
    def starts(self) -> Tuple[int, ...]:
        return tuple(w.i for w in self.windows)


# ---------------------------------------------------------------------------
# Reduction and containment
# ---------------------------------------------------------------------------

def reduce(word: Sequence[int]) -> Permutation:
    """
    Order-isomorphic canonical permutation of a word of distinct positive integers.

    red(394176) = 263154.
    """
    values = tuple(word)
    if not values:
        raise InvalidPermutationError("cannot reduce an empty word")
    if any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in values):
        raise InvalidPermutationError(f"word must contain positive integers: {values!r}")
    if len(set(values)) != len(values):
        raise InvalidPermutationError(f"word has duplicate entries: {values!r}")
    if len(values) > MAX_PERMUTATION_LENGTH:
        raise CapacityError(f"word length {len(values)} exceeds capacity {MAX_PERMUTATION_LENGTH}")
    return Permutation._trusted(reduce_entries(values))


def occurrence_starts(pattern: Sequence[int], host: Sequence[int]) -> List[int]:
    """1-based start positions of consecutive occurrences of pattern in host."""
    k, n = len(pattern), len(host)
    if k > n:
        return []
    target = _argsort(pattern)
    if k == 1:
        return list(range(1, n + 1))
    ascending = pattern[0] < pattern[1]
    starts = []
    for s in range(n - k + 1):
        if (host[s] < host[s + 1]) != ascending:
            continue
        if _argsort(host[s:s + k]) == target:
            starts.append(s + 1)
    return starts


def contains_entries(pattern: Sequence[int], host: Sequence[int]) -> bool:
    """Tuple-level containment test used by the hot enumeration loops."""
    k, n = len(pattern), len(host)
    if k > n:
        return False
    if k == 1:
        return True
    target = _argsort(pattern)
    ascending = pattern[0] < pattern[1]
    for s in range(n - k + 1):
        if (host[s] < host[s + 1]) == ascending and _argsort(host[s:s + k]) == target:
            return True
    return False


def occurrences(pattern: Permutation, host: Permutation) -> OccurrenceList:
    """All windows of host whose reduction equals pattern, ascending."""
    k = len(pattern)
    windows = tuple(Window(s, s + k - 1) for s in occurrence_starts(pattern.entries, host.entries))
    return OccurrenceList(pattern=pattern, host=host, windows=windows)


def contains(pattern: Permutation, host: Permutation) -> bool:
    """True iff host contains pattern as a consecutive pattern."""
    return contains_entries(pattern.entries, host.entries)


# ---------------------------------------------------------------------------
# Prefixes, suffixes, bifixes, exterior, interior
# ---------------------------------------------------------------------------

def _check_length(tau: Permutation, k: int) -> None:
    if not 1 <= k <= len(tau):
        raise InvalidPermutationError(f"k={k} out of range 1..{len(tau)}")


def prefix(tau: Permutation, k: int) -> Permutation:
    _check_length(tau, k)
    return Permutation._trusted(reduce_entries(tau.entries[:k]))


def suffix(tau: Permutation, k: int) -> Permutation:
    _check_length(tau, k)
    return Permutation._trusted(reduce_entries(tau.entries[len(tau) - k:]))


def is_bifix_length(entries: Sequence[int], k: int) -> bool:
    """True iff the length-k prefix and suffix of entries reduce identically."""
    n = len(entries)
    if k >= 2 and (entries[0] < entries[1]) != (entries[n - k] < entries[n - k + 1]):
        return False
    return _argsort(entries[:k]) == _argsort(entries[n - k:])


def bifixes(tau: Permutation) -> List[int]:
    """All proper bifix lengths k in 1..n-1, ascending."""
    return [k for k in range(1, len(tau)) if is_bifix_length(tau.entries, k)]


def exterior_length_of(entries: Sequence[int]) -> int:
    """|x(tau)| straight from the entries; the hot path of the exhaustive tables."""
    n = len(entries)
    if n < 2:
        raise UndefinedOperationError("the exterior is only defined for length >= 2")
    for k in range(n - 1, 1, -1):
        if is_bifix_length(entries, k):
            return k
    return 1


def exterior(tau: Permutation) -> Permutation:
    """x(tau): the longest proper bifix."""
    return prefix(tau, exterior_length_of(tau.entries))


def interior(tau: Permutation) -> Permutation:
    """i(tau) = tau_[2, n-1]."""
    if len(tau) < 3:
        raise UndefinedOperationError("the interior is only defined for length >= 3")
    return Permutation._trusted(reduce_entries(tau.entries[1:-1]))


def is_non_overlapping(tau: Permutation) -> bool:
    """True iff |x(tau)| = 1."""
    return exterior_length_of(tau.entries) == 1


# ---------------------------------------------------------------------------
# Shape predicates, symmetries and sums
# ---------------------------------------------------------------------------

def is_monotone_entries(entries: Sequence[int]) -> bool:
    n = len(entries)
    return all(entries[t] < entries[t + 1] for t in range(n - 1)) or \
        all(entries[t] > entries[t + 1] for t in range(n - 1))


def is_monotone(tau: Permutation) -> bool:
    """True iff tau is 12...n or n...21."""
    return is_monotone_entries(tau.entries)


def is_alternating(tau: Permutation) -> bool:
    """True iff ascents and descents alternate (up-down or down-up)."""
    e = tau.entries
    ups = [e[t] < e[t + 1] for t in range(len(e) - 1)]
    return all(ups[t] != ups[t + 1] for t in range(len(ups) - 1))


def reversal(tau: Permutation) -> Permutation:
    return Permutation._trusted(tau.entries[::-1])


def complement(tau: Permutation) -> Permutation:
    n1 = len(tau) + 1
    return Permutation._trusted(tuple(n1 - v for v in tau.entries))


def inverse(tau: Permutation) -> Permutation:
    out = [0] * len(tau)
    for position, value in enumerate(tau.entries, 1):
        out[value - 1] = position
    return Permutation._trusted(tuple(out))


def direct_sum(sigma: Permutation, tau: Permutation) -> Permutation:
    """1324 (+) 21 = 132465."""
    shift = len(sigma)
    return Permutation(sigma.entries + tuple(v + shift for v in tau.entries))


def skew_sum(sigma: Permutation, tau: Permutation) -> Permutation:
    """1324 (-) 21 = 354621."""
    shift = len(tau)
    return Permutation(tuple(v + shift for v in sigma.entries) + tau.entries)


def symmetry_orbit(tau: Permutation) -> FrozenSet[Permutation]:
    """{tau, reversal, complement, reverse-complement}."""
    rev = reversal(tau)
    return frozenset({tau, rev, complement(tau), complement(rev)})


def all_patterns(tau: Permutation, length: Optional[int] = None) -> List[Permutation]:
    """Distinct consecutive patterns of tau (of one length, or of every length)."""
    lengths = [length] if length is not None else range(1, len(tau) + 1)
    found = []
    for k in lengths:
        seen = set()
        for entries in window_patterns(tau.entries, k):
            if entries not in seen:
                seen.add(entries)
                found.append(Permutation._trusted(entries))
    return found
