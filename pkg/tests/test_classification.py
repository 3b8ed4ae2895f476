"""
Unit tests for full interval classification.
"""

import sys
from pathlib import Path
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.classification import ClassificationReport, classify, report_lines
from src.core.errors import InternalConsistencyError, NotComparableError
from src.core.permutation import Permutation
from src.utils.config_loader import RunConfig


def P(text):
    return Permutation.parse(text)


class TestClassify:
    """Test cases for classify()."""

    def setup_method(self):
        """Setup for each test."""
        self.report = classify(P('12'), P('213546'))

    def test_rank_structure(self):
        """Test the rank fields of the report."""
        assert self.report.sigma == '1,2'
        assert self.report.tau == '2,1,3,5,4,6'
        assert self.report.rank_sizes == [1, 3, 3, 2, 1]
        assert self.report.breaking_rank == 1
        assert not self.report.is_chain
        assert self.report.rank_unimodal

    def test_mobius(self):
        """Test the Möbius field."""
        assert self.report.mobius == {'value': -1, 'branch': 'recursive-carrier'}

    def test_topology(self):
        """Test the topology fields."""
        assert not self.report.disconnected
        assert not self.report.shellable
        assert self.report.disconnection_witness == {
            'pi': '2,1,3', 'window': [1, 6], 'sub': '2,1,3,5,4,6'}
        assert self.report.cl_verified is False
        assert self.report.shelling == {'cl_order': False, 'exists': False}

    def test_exterior_fields(self):
        """Test the exterior and interior fields."""
        assert self.report.exterior == '2,1,3'
        assert self.report.interior == '1,2,4,3'
        assert self.report.has_carrier
        assert self.report.carrier == '2,1,3'

    def test_sperner_and_lattice(self):
        """Test the Sperner and lattice fields."""
        assert self.report.strongly_sperner['value']
        assert self.report.strongly_sperner['method'] == 'oracle'
        assert not self.report.lattice

    def test_complete(self):
        """Test that an uncapped report is complete."""
        assert not self.report.partial
        assert self.report.notes == []

    def test_round_trip(self):
        """Test report dict export and reload."""
        assert ClassificationReport.from_dict(self.report.to_dict()) == self.report

    def test_compact(self):
        """Test compact permutation text in the report."""
        report = classify(P('12'), P('213546'), RunConfig(compact=True))
        assert report.tau == '213546'
        assert report.disconnection_witness['sub'] == '213546'

    def test_report_lines(self):
        """Test the text report lines."""
        lines = report_lines(self.report)
        assert any(line.startswith('rank_sizes') for line in lines)
        assert len(lines) == len(self.report.to_dict())


class TestClassifyEdgeCases:
    """Test cases for trivial and capped intervals."""

    def test_single_element(self):
        """Test the report on a one-element interval."""
        report = classify(P('21'), P('21'))
        assert report.rank_sizes == [1]
        assert report.mobius['value'] == 1
        assert report.is_chain
        assert report.exterior == '1'
        assert report.interior is None
        assert report.has_carrier is None

    def test_disconnected(self):
        """Test the report on a disconnected interval."""
        report = classify(P('213'), P('213546'))
        assert report.disconnected
        assert report.mobius['value'] == 1
        assert not report.shellable

    def test_capped_label_check(self):
        """Test a partial report when the label check is capped."""
        report = classify(P('1'), P('68372514'), RunConfig(max_cl_chains=1))
        assert report.partial
        assert report.cl_verified is None
        assert report.shellable
        assert report.disconnection_witness is None
        assert report.exterior == '2,4,1,3'
        assert any('label verification' in note for note in report.notes)

    def test_not_comparable(self):
        """Test incomparable pairs."""
        with pytest.raises(NotComparableError):
            classify(P('321'), P('213546'))

    def test_consistency_check(self):
        """Test that contradictory verdicts are caught."""
        report = classify(P('12'), P('213546'))
        report.shellable = True
        with pytest.raises(InternalConsistencyError):
            report.check_consistency()
