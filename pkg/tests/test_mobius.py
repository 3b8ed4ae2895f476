"""
Unit tests for the Möbius function: exterior recursion against the definition.
"""

import sys
from itertools import permutations
from pathlib import Path
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.errors import CapExceededError, NotComparableError, UndefinedOperationError
from src.core.interval import build_interval
from src.core.mobius import (
    MobiusBranch, carrier_of_interval, has_carrier_element, mobius_cache_clear, mobius_oracle,
    mobius_recursive, mobius_zero_sufficient,
)
from src.core.permutation import Permutation, all_patterns
from src.core.topology import straddles


def P(text):
    return Permutation.parse(text)


def small_intervals(max_n, min_n=1):
    for n in range(min_n, max_n + 1):
        for entries in permutations(range(1, n + 1)):
            tau = Permutation(entries)
            for sigma in all_patterns(tau):
                yield sigma, tau


class TestMobiusValues:
    """Test cases for known values."""

    def setup_method(self):
        """Setup for each test."""
        mobius_cache_clear()

    def test_diagonal(self):
        """Test mu on the diagonal."""
        assert mobius_recursive(P('213546'), P('213546')).value == 1
        assert mobius_oracle(P('213546'), P('213546')) == 1

    def test_cover(self):
        """Test mu on a cover relation."""
        result = mobius_recursive(P('12'), P('123'))
        assert result.value == -1
        assert result.branch == MobiusBranch.SMALL_RANK

    def test_carrier_recursion(self):
        """Test the recursive carrier branch and its trace."""
        result = mobius_recursive(P('12'), P('213546'), trace=True)
        assert result.value == -1
        assert result.branch == MobiusBranch.RECURSIVE_CARRIER
        assert result.recursion_trace == ((P('12'), P('213546')), (P('12'), P('213')))
        assert mobius_oracle(P('12'), P('213546')) == -1

    def test_disconnected_interval(self):
        """Test mu on a disconnected interval."""
        assert mobius_recursive(P('213'), P('213546')).value == 1
        assert mobius_oracle(P('213'), P('213546')) == 1

    def test_rank_two(self):
        """Test the rank-two branches."""
        # 2143 is not monotone and 21 = x(2143)
        result = mobius_recursive(P('21'), P('2143'))
        assert result.value == 1
        assert result.branch == MobiusBranch.RANK2_NONMONOTONE
        assert mobius_recursive(P('1'), P('123')).value == 0

    def test_trace_is_dropped_by_default(self):
        """Test that no trace is kept unless asked for."""
        assert mobius_recursive(P('12'), P('213546')).recursion_trace is None

    def test_to_dict(self):
        """Test result serialization."""
        data = mobius_recursive(P('12'), P('213546'), trace=True).to_dict(compact=True)
        assert data == {'value': -1, 'branch': 'recursive-carrier',
                        'trace': [['12', '213546'], ['12', '213']]}

    def test_not_comparable(self):
        """Test incomparable pairs."""
        with pytest.raises(NotComparableError):
            mobius_recursive(P('321'), P('213546'))
        with pytest.raises(NotComparableError):
            mobius_oracle(P('321'), P('213546'))

    def test_oracle_cap(self):
        """Test the oracle element cap."""
        with pytest.raises(CapExceededError):
            mobius_oracle(P('12'), P('213546'), max_elements=5)


class TestMobiusAgreement:
    """The recursion agrees with the definition on every small interval."""

    def test_exhaustive_small(self):
        """Test recursion against the definition for n up to 6."""
        for sigma, tau in small_intervals(6):
            assert mobius_recursive(sigma, tau).value == mobius_oracle(sigma, tau), (sigma, tau)

    @pytest.mark.slow
    def test_exhaustive_length_7(self):
        """Test recursion against the definition at n = 7."""
        for sigma, tau in small_intervals(7, min_n=7):
            assert mobius_recursive(sigma, tau).value == mobius_oracle(sigma, tau), (sigma, tau)

    @pytest.mark.slow
    def test_sampled_longer(self):
        """Test recursion against the definition on random pairs at n = 8 and 9."""
        import numpy as np
        rng = np.random.default_rng(20240601)
        for _ in range(10_000):
            n = int(rng.integers(8, 10))
            tau = Permutation(tuple(int(v) for v in rng.permutation(n) + 1))
            patterns = all_patterns(tau)
            sigma = patterns[int(rng.integers(0, len(patterns)))]
            assert mobius_recursive(sigma, tau).value == mobius_oracle(sigma, tau), (sigma, tau)

    def test_values_are_small(self):
        """Test that mu takes values in -1, 0, 1."""
        for sigma, tau in small_intervals(6):
            assert mobius_recursive(sigma, tau).value in (-1, 0, 1)

    def test_zero_sufficient_condition(self):
        """Test the sufficient condition for mu = 0."""
        for sigma, tau in small_intervals(6):
            if mobius_zero_sufficient(sigma, tau):
                assert mobius_recursive(sigma, tau).value == 0, (sigma, tau)

    def test_straddle_gives_one(self):
        """Test that straddling intervals have mu = 1."""
        for sigma, tau in small_intervals(6):
            if len(tau) - len(sigma) >= 3 and straddles(sigma, tau):
                assert mobius_recursive(sigma, tau).value == 1, (sigma, tau)

    def test_rank_one_and_zero(self):
        """Test mu at rank 0 and 1."""
        for sigma, tau in small_intervals(5):
            d = len(tau) - len(sigma)
            if d < 2:
                assert mobius_recursive(sigma, tau).value == (-1) ** d


class TestCarriers:
    """Test cases for carrier elements."""

    def test_carrier_exists(self):
        """Test carrier existence."""
        assert has_carrier_element(P('213546'))
        assert has_carrier_element(P('123'))
        assert not has_carrier_element(P('132'))

    def test_carrier_needs_length_three(self):
        """Test that carriers need length 3."""
        with pytest.raises(UndefinedOperationError):
            has_carrier_element(P('12'))

    def test_no_carrier_count_for_three(self):
        """Test the permutations of length 3 without a carrier."""
        missing = [e for e in permutations(range(1, 4)) if not has_carrier_element(Permutation(e))]
        assert len(missing) == 4

    def test_carrier_of_interval(self):
        """Test the carrier of an interval."""
        assert carrier_of_interval(P('12'), P('213546')) == P('213')
        assert carrier_of_interval(P('1'), P('132')) is None
        assert carrier_of_interval(P('1'), P('12')) is None

    def test_carrier_lies_in_interval(self):
        """Test that the carrier lies in the interval."""
        for sigma, tau in small_intervals(6, min_n=3):
            carrier = carrier_of_interval(sigma, tau)
            if carrier is not None:
                assert carrier in build_interval(sigma, tau)
