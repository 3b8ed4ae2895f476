"""
Unit tests for interval construction and chain structure.
"""

import sys
from itertools import permutations
from pathlib import Path
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.errors import InvalidChainError, NotComparableError
from src.core.interval import (
    build_interval, build_interval_batch, count_maximal_chains, is_chain, is_criss_cross,
    is_product_of_two_chains, maximal_chains, open_interval_components, order_complex_facets,
    rank_sizes, to_dot, to_json_dict, validate_chain,
)
from src.core.permutation import (
    Permutation, Window, all_patterns, complement, exterior_length_of, reduce_entries, reversal,
)


def P(text):
    return Permutation.parse(text)


def small_intervals(max_n):
    """Every interval [sigma, tau] with |tau| <= max_n."""
    for n in range(1, max_n + 1):
        for entries in permutations(range(1, n + 1)):
            tau = Permutation(entries)
            for sigma in all_patterns(tau):
                yield sigma, tau


class TestBuildInterval:
    """Test cases for interval construction."""

    def setup_method(self):
        """Setup for each test."""
        self.interval = build_interval(P('12'), P('213546'))

    def test_rank_sizes(self):
        """Test rank sizes of [12, 213546]."""
        assert rank_sizes(self.interval) == (1, 3, 3, 2, 1)
        assert len(self.interval) == 10
        assert self.interval.length == 4

    def test_rank_levels(self):
        """Test the elements at each rank."""
        assert self.interval.ranks[1] == (P('123'), P('132'), P('213'))
        assert self.interval.ranks[3] == (P('12435'), P('21354'))

    def test_cover_edges(self):
        """Test cover edges."""
        assert len(self.interval.edges()) == 15
        assert self.interval.covers[P('213546')] == (P('12435'), P('21354'))
        assert self.interval.covers[P('123')] == (P('12'),)
        assert self.interval.parents[P('12')] == (P('123'), P('132'), P('213'))

    def test_window_classes(self):
        """Test the windows behind each element."""
        assert self.interval.window_classes[P('213')] == (Window(1, 3), Window(4, 6))
        assert self.interval.representative(P('132')) == Window(3, 5)

    def test_single_element_interval(self):
        """Test a one-element interval."""
        interval = build_interval(P('213'), P('213'))
        assert len(interval) == 1
        assert rank_sizes(interval) == (1,)

    def test_rank_sizes_start_1_2_5(self):
        """Test the rank sizes 1, 2, 5 at the bottom of [1, 1265473]."""
        assert rank_sizes(build_interval(P('1'), P('1265473')))[:3] == (1, 2, 5)

    def test_not_comparable(self):
        """Test incomparable pairs."""
        with pytest.raises(NotComparableError):
            build_interval(P('321'), P('213546'))

    def test_leq(self):
        """Test the containment order."""
        assert self.interval.leq(P('213'), P('21354'))
        assert not self.interval.leq(P('132'), P('2134'))

    def test_batch_matches_single(self):
        """Test batch construction against single builds."""
        pairs = [(P('12'), P('213546')), (P('1'), P('2143'))]
        batch = build_interval_batch(pairs)
        assert [rank_sizes(i) for i in batch] == [rank_sizes(build_interval(s, t)) for s, t in pairs]


class TestChains:
    """Test cases for chain and product-of-chains detection."""

    def test_monotone_chain(self):
        """Test that monotone tau gives a chain."""
        verdict = is_chain(build_interval(P('1'), P('1234')))
        assert verdict.is_chain
        assert verdict.reason == 'monotone'

    def test_not_a_chain(self):
        """Test an interval that is not a chain."""
        assert not is_chain(build_interval(P('12'), P('213546'))).is_chain

    def test_unique_prefix_chain(self):
        """Test the unique-prefix chain case."""
        verdict = is_chain(build_interval(P('312'), P('51342')))
        assert verdict.is_chain
        assert verdict.occurrence == Window(1, 3)

    def test_product_of_two_chains(self):
        """Test the product of two chains."""
        interval = build_interval(P('132'), P('215346'))
        assert is_product_of_two_chains(interval) == (2, 3)
        assert len(interval) == 6

    def test_not_product_when_multiple_occurrences(self):
        """Test that multiple occurrences rule out a product."""
        assert is_product_of_two_chains(build_interval(P('12'), P('213546'))) is None

    def test_sum_with_increasing_sides_is_product(self):
        """Test sums with increasing sides."""
        # alpha (+) sigma (+) beta with sigma_1 > sigma_last and alpha, beta increasing
        interval = build_interval(P('21'), P('12435'))
        assert is_product_of_two_chains(interval) == (3, 2)

    def test_chain_criterion_agrees_with_rank_sizes(self):
        """Test the chain criterion against rank sizes."""
        for sigma, tau in small_intervals(5):
            verdict = is_chain(build_interval(sigma, tau))
            assert verdict.is_chain == all(s == 1 for s in rank_sizes(build_interval(sigma, tau)))


class TestMaximalChains:
    """Test cases for maximal chains and order complex facets."""

    def setup_method(self):
        """Setup for each test."""
        self.interval = build_interval(P('12'), P('213546'))

    def test_chain_count(self):
        """Test the maximal chain count."""
        chains = maximal_chains(self.interval)
        assert len(chains) == 8
        assert count_maximal_chains(self.interval) == 8
        assert all(len(c) == 5 for c in chains)
        assert len({c.elements for c in chains}) == 8

    def test_chain_interval_has_one_chain(self):
        """Test that a chain has one maximal chain."""
        assert len(maximal_chains(build_interval(P('1'), P('1234')))) == 1

    def test_chain_count_cap(self):
        """Test the chain enumeration cap."""
        from src.core.errors import CapExceededError
        with pytest.raises(CapExceededError):
            maximal_chains(self.interval, max_chains=7)

    def test_chains_are_saturated(self):
        """Test that maximal chains are saturated."""
        for chain in maximal_chains(build_interval(P('21'), P('214356'))):
            for upper, lower in chain.edges():
                assert lower in build_interval(P('21'), P('214356')).covers[upper]

    def test_validate_chain(self):
        """Test chain validation."""
        chain = maximal_chains(self.interval)[0]
        assert validate_chain(self.interval, chain.elements) == chain
        with pytest.raises(InvalidChainError):
            validate_chain(self.interval, [P('213546'), P('2134'), P('213'), P('12')])

    def test_facets(self):
        """Test facets of the order complex."""
        facets = order_complex_facets(self.interval)
        assert len(facets) == 8
        assert all(len(f) == 3 for f in facets)

    def test_facets_of_rank_two(self):
        """Test facets at rank 2."""
        interval = build_interval(P('1'), P('132'))
        assert sorted(order_complex_facets(interval), key=sorted) == [frozenset({P('12')}), frozenset({P('21')})]

    def test_facets_match_chains(self):
        """Test that facets match maximal chains."""
        interval = build_interval(P('21'), P('21435'))
        facets = order_complex_facets(interval)
        assert len(facets) == count_maximal_chains(interval)
        assert all(len(f) == interval.length - 1 for f in facets)

    def test_no_facets_below_rank_two(self):
        """Test that there are no facets below rank 2."""
        assert order_complex_facets(build_interval(P('1'), P('12'))) == []


class TestIntervalShape:
    """Test cases for structural invariants."""

    def test_components(self):
        """Test open interval components."""
        assert len(open_interval_components(build_interval(P('213'), P('213546')))) == 2
        assert len(open_interval_components(build_interval(P('12'), P('213546')))) == 1

    def test_criss_cross(self):
        """Test the criss-cross shape."""
        interval = build_interval(P('1'), P('21435'))
        assert len(P('21435')) - exterior_length_of(P('21435').entries) == 2
        assert is_criss_cross(interval)
        assert not is_criss_cross(build_interval(P('12'), P('213546')))

    def test_rank_size_bound(self):
        """Test the rank size bound."""
        for sigma, tau in small_intervals(6):
            sizes = rank_sizes(build_interval(sigma, tau))
            n = len(sizes) - 1
            assert all(size <= n + 1 - r for r, size in enumerate(sizes))

    def test_covers_are_prefix_and_suffix_reductions(self):
        """Test that covers drop the first or last entry."""
        for sigma, tau in small_intervals(5):
            interval = build_interval(sigma, tau)
            for perm in interval.elements[1:]:
                candidates = {Permutation(reduce_entries(perm.entries[1:])),
                              Permutation(reduce_entries(perm.entries[:-1]))}
                assert set(interval.covers[perm]) == {c for c in candidates if c in interval}

    def test_windows_match_rank_sizes(self):
        """Test windows against rank sizes."""
        for sigma, tau in small_intervals(5):
            interval = build_interval(sigma, tau)
            for r, level in enumerate(interval.ranks):
                lengths = {interval.representative(p).length for p in level}
                assert lengths == {len(sigma) + r}

    def test_symmetric_intervals_have_same_shape(self):
        """Test that symmetric intervals share a shape."""
        for sigma, tau in small_intervals(5):
            interval = build_interval(sigma, tau)
            for op in (reversal, complement):
                image = build_interval(op(sigma), op(tau))
                assert rank_sizes(image) == rank_sizes(interval)
                assert len(image.edges()) == len(interval.edges())

    def test_criss_cross_when_exterior_is_two_short(self):
        """Test the criss-cross shape when sigma is two below the exterior."""
        for n in range(4, 7):
            for entries in permutations(range(1, n + 1)):
                if n - exterior_length_of(entries) != 2:
                    continue
                tau = Permutation(entries)
                for sigma in all_patterns(tau):
                    interval = build_interval(sigma, tau)
                    if interval.length >= 2:
                        assert is_criss_cross(interval)


class TestExport:
    """Test cases for JSON and DOT views of an interval."""

    def setup_method(self):
        """Setup for each test."""
        self.interval = build_interval(P('12'), P('213546'))

    def test_json_dict(self):
        """Test the JSON interval dump."""
        data = to_json_dict(self.interval)
        assert data['sigma'] == '1,2'
        assert data['tau'] == '2,1,3,5,4,6'
        assert [len(level) for level in data['ranks']] == [1, 3, 3, 2, 1]
        assert len(data['covers']) == 15
        assert ['1,2', '1,2,3'] in data['covers']

    def test_dot(self):
        """Test DOT output."""
        dot = to_dot(self.interval, compact=True)
        assert dot.startswith('digraph Interval {')
        assert dot.count('->') == 15
        assert '"213546" -> "12435";' in dot

    def test_chain_dot_is_a_path(self):
        """Test that a chain draws as a path."""
        dot = to_dot(build_interval(P('1'), P('123')), compact=True)
        assert dot.count('->') == 2
