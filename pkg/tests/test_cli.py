"""
Tests for the consec_poset command line.
"""

import json
import logging
import sys
from pathlib import Path
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.main import build_parser, run
from src.utils import logging_config

CONFIG_DIR = str(Path(__file__).parent.parent / 'config')


def cli(*argv, environ=None):
    return run(list(argv) + ['--config', CONFIG_DIR], environ=environ or {})


class TestCLI:
    """Test cases for the subcommands."""

    def teardown_method(self):
        """Drop handlers bound to the captured streams."""
        logging.getLogger().handlers = []
        logging_config._poset_logger = None

    def test_classify(self, capsys):
        """Test the full JSON report."""
        assert cli('classify', '12', '213546') == 0
        report = json.loads(capsys.readouterr().out)
        assert report['rank_sizes'] == [1, 3, 3, 2, 1]
        assert report['mobius']['value'] == -1

    def test_mobius_with_oracle(self, capsys):
        """Test mobius with trace and oracle cross-check."""
        assert cli('mobius', '12', '213546', '--trace', '--oracle', '--compact') == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload['value'] == -1
        assert payload['oracle'] == -1
        assert payload['trace'] == [['12', '213546'], ['12', '213']]

    def test_global_flag_before_command(self, capsys):
        """Test a global flag given before the subcommand."""
        assert cli('--compact', 'mobius', '213', '213546') == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload['sigma'] == '213'
        assert payload['value'] == 1

    def test_not_comparable_exit_code(self, capsys):
        """Test exit code 3 for incomparable permutations."""
        assert cli('classify', '321', '213546') == 3
        assert capsys.readouterr().out == ''

    def test_invalid_permutation_exit_code(self):
        """Test exit code 2 for a malformed permutation."""
        assert cli('classify', '1,1', '12') == 2

    def test_usage_error(self):
        """Test exit code 2 for an argparse usage error."""
        with pytest.raises(SystemExit) as excinfo:
            cli('census', '--n', '0', '--stat', 'exterior-length')
        assert excinfo.value.code == 2

    def test_capacity_exit_code(self):
        """Test exit code 4 past the exhaustive cap."""
        assert cli('table', 'exterior', '--n-max', '11') == 4

    def test_partial_report_exit_code(self, capsys):
        """Test exit code 4 for a partial report."""
        code = cli('classify', '12', '213546', environ={'CONSEC_POSET_MAX_CL_CHAINS': '1'})
        assert code == 4
        assert json.loads(capsys.readouterr().out)['partial']

    def test_ranks_with_chains(self, capsys):
        """Test rank output with a chain family."""
        assert cli('ranks', '12', '213546', '--chains', '3', '--compact') == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload['sizes'] == [1, 3, 3, 2, 1]
        assert payload['chains']['chains'][0] == ['123', '2134', '21354']

    def test_export_dot(self, capsys):
        """Test plain DOT export."""
        assert cli('export', '12', '213546', '--dot', '--compact') == 0
        assert capsys.readouterr().out.count('->') == 15

    def test_export_labeled(self, capsys):
        """Test labelled DOT export."""
        assert cli('export', '21', '214356', '--dot-labeled', '--compact') == 0
        assert 'label="1-e"' in capsys.readouterr().out

    def test_export_json(self, capsys):
        """Test JSON export."""
        assert cli('export', '12', '213546', '--json') == 0
        assert len(json.loads(capsys.readouterr().out)['covers']) == 15

    def test_table_csv(self, capsys):
        """Test CSV table output."""
        assert cli('table', 'exterior', '--n-max', '5', '--format', 'csv') == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == 'n,1,2,3,4'
        assert lines[-1] == '5,48,58,12,2'

    def test_sequences(self, capsys):
        """Test integer sequences."""
        assert cli('sequence', 'no-carrier', '--n-max', '6') == 0
        assert json.loads(capsys.readouterr().out)['values'] == [0, 4, 12, 84, 548]
        assert cli('sequence', 'exterior-n-minus-2', '--n-max', '7') == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload['n_min'] == 4
        assert payload['values'] == [10, 12, 14, 16]

    def test_census(self, capsys):
        """Test the exhaustive census summary."""
        assert cli('census', '--n', '6', '--stat', 'exterior-length') == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary['counts'] == {'1': 280, '2': 306, '3': 118, '4': 14, '5': 2}
        assert summary['total'] == 720

    def test_census_fraction(self, capsys):
        """Test the census fraction for an indicator."""
        assert cli('census', '--n', '5', '--sigma', '21', '--stat', 'disconnected-subinterval') == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary['counted'] == 120
        assert summary['fraction'].endswith('/120')

    def test_census_records(self, capsys):
        """Test census records before the summary."""
        assert cli('census', '--n', '3', '--stat', 'exterior-length', '--records') == 0
        lines = capsys.readouterr().out.splitlines()
        assert json.loads(lines[0]) == {'tau': '1,2,3', 'value': 2}

    def test_sample_is_reproducible(self, capsys):
        """Test that a seeded sample is reproducible."""
        argv = ('sample', '--n', '10', '--size', '500', '--stat', 'has-carrier', '--seed', '3')
        assert cli(*argv) == 0
        first = capsys.readouterr().out
        assert cli(*argv) == 0
        assert capsys.readouterr().out == first
        assert json.loads(first)['seed'] == 3

    def test_output_file(self, tmp_path, capsys):
        """Test writing to --output."""
        target = tmp_path / 'out' / 'interval.dot'
        assert cli('export', '12', '213546', '--output', str(target)) == 0
        assert capsys.readouterr().out == ''
        assert target.read_text().startswith('digraph Interval {')

    def test_output_is_stable(self, tmp_path):
        """Test byte-identical repeated output."""
        first, second = tmp_path / 'a.json', tmp_path / 'b.json'
        cli('classify', '21', '214356', '--output', str(first))
        cli('classify', '21', '214356', '--output', str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_compact_keeps_json_layout(self, capsys):
        """Test that --compact changes permutation text but not JSON indentation."""
        assert cli('mobius', '12', '213546', '--compact') == 0
        compact = capsys.readouterr().out
        assert cli('mobius', '12', '213546') == 0
        plain = capsys.readouterr().out
        assert json.loads(compact)['tau'] == '213546'
        assert json.loads(plain)['tau'] == '2,1,3,5,4,6'
        assert '\n  "value": -1' in compact
        assert len(compact.splitlines()) == len(plain.splitlines())

    @pytest.mark.parametrize('argv', [
        ('mobius', '12', '213546'),
        ('ranks', '12', '213546'),
        ('classify', '12', '213546'),
        ('census', '--n', '4', '--stat', 'exterior-length'),
        ('sample', '--n', '10', '--size', '50', '--stat', 'has-carrier'),
    ])
    def test_csv_rejected_outside_tables(self, argv, capsys):
        """Test exit code 2 for --format csv on commands without a table."""
        assert cli(*argv, '--format', 'csv') == 2
        assert capsys.readouterr().out == ''

    def test_sequence_csv(self, capsys):
        """Test CSV sequence output."""
        assert cli('sequence', 'no-carrier', '--n-max', '5', '--format', 'csv') == 0
        assert capsys.readouterr().out.splitlines() == ['n,value', '2,0', '3,4', '4,12', '5,84']

    def test_sampled_census_records(self, capsys):
        """Test sampled census records followed by the estimate."""
        assert cli('census', '--n', '8', '--stat', 'exterior-length', '--sample', '40',
                   '--seed', '7', '--records') == 0
        lines = capsys.readouterr().out.splitlines()
        records = [json.loads(line) for line in lines[:40]]
        assert all(set(r) == {'tau', 'value'} for r in records)
        estimate = json.loads('\n'.join(lines[40:]))
        assert estimate['sample_size'] == 40
        assert estimate['point_estimate'] == pytest.approx(sum(r['value'] for r in records) / 40)


class TestEnvironment:
    """Test cases for configuration through the environment."""

    def teardown_method(self):
        """Drop handlers bound to the captured streams."""
        logging.getLogger().handlers = []
        logging_config._poset_logger = None

    def test_text_format(self, capsys):
        """Test text format from the environment."""
        assert cli('mobius', '12', '213546', environ={'CONSEC_POSET_FORMAT': 'text'}) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[2].split() == ['value', '-1']

    def test_flag_beats_environment(self, capsys):
        """Test that flags override the environment."""
        assert cli('mobius', '12', '213546', '--format', 'json',
                   environ={'CONSEC_POSET_FORMAT': 'text'}) == 0
        assert json.loads(capsys.readouterr().out)['value'] == -1

    def test_bad_environment(self):
        """Test exit code 2 for a bad environment value."""
        assert cli('mobius', '12', '213546', environ={'CONSEC_POSET_THREADS': 'many'}) == 2

    def test_parser_requires_command(self):
        """Test that a subcommand is required."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])
