"""
consec-poset command line.

Ties the interval, Möbius, topology, rank and statistics modules together
behind one argparse entry point. Machine output goes to stdout (or --output),
logs go to stderr.
"""

import argparse
import logging
import sys
from math import factorial
from typing import List, Optional

import pandas as pd

from .core.classification import classify, report_lines
from .core.enumeration import check_exhaustive
from .core.errors import InternalConsistencyError, PosetError, PreconditionError
from .core.exterior_stats import (
    SAMPLE_STATISTICS, STATISTICS, census_records, distribution_table, exterior_length_table,
    no_carrier_counts, sample_records, sample_statistic,
)
from .core.interval import build_interval, to_dot, to_json_dict
from .core.mobius import mobius_oracle, mobius_recursive
from .core.permutation import Permutation
from .core.rank_analysis import (
    is_lattice, is_rank_unimodal, is_strongly_sperner, rank_intersecting_chains, rank_profile,
)
from .core.topology import edge_label_sets
from .utils.config_loader import ConfigLoader, RunConfig
from .utils.exporters import dumps_json, emit, frame_to_csv
from .utils.logging_config import get_logger, initialize_logging


EXIT_OK = 0
EXIT_UNEXPECTED = 1

SEQUENCES = ('no-carrier', 'non-overlapping', 'exterior-n-minus-2')

# commands whose output is a table; the rest have no CSV rendering
CSV_COMMANDS = ('table', 'sequence')


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


class PosetToolkit:
    """Runs one subcommand against a resolved RunConfig and returns its output text."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.logger = get_logger('cli')
        self.exit_code = EXIT_OK

    def parse(self, text: str) -> Permutation:
        return Permutation.parse(text, self.config.max_permutation_length)

    def render(self, payload) -> str:
        if self.config.output_format == 'text' and isinstance(payload, dict):
            width = max((len(k) for k in payload), default=0)
            return ''.join(f"{k.ljust(width)}  {v}\n" for k, v in payload.items())
        return dumps_json(payload)

    # ------------------------------------------------------------------
    # Per-interval commands
    # ------------------------------------------------------------------

    def cmd_classify(self, args) -> str:
        sigma, tau = self.parse(args.sigma), self.parse(args.tau)
        if args.dot_labeled:
            return self._labeled_dot(sigma, tau)
        report = classify(sigma, tau, self.config)
        if report.partial:
            self.exit_code = 4
        if self.config.output_format == 'text':
            return '\n'.join(report_lines(report)) + '\n'
        return dumps_json(report.to_dict())

    def cmd_mobius(self, args) -> str:
        sigma, tau = self.parse(args.sigma), self.parse(args.tau)
        result = mobius_recursive(sigma, tau, trace=args.trace)
        payload = {'sigma': sigma.format(self.config.compact), 'tau': tau.format(self.config.compact)}
        payload.update(result.to_dict(self.config.compact))
        if args.oracle:
            oracle = mobius_oracle(sigma, tau, self.config.max_mobius_elements)
            payload['oracle'] = oracle
            if oracle != result.value:
                self.logger.error(f"Möbius recursion {result.value} disagrees with oracle {oracle} "
                                  f"on [{sigma}, {tau}]")
                raise InternalConsistencyError(f"mu({sigma}, {tau}): recursion {result.value}, oracle {oracle}")
        return self.render(payload)

    def cmd_ranks(self, args) -> str:
        sigma, tau = self.parse(args.sigma), self.parse(args.tau)
        interval = build_interval(sigma, tau)
        profile = rank_profile(interval)
        payload = {
            'sizes': list(profile.sizes),
            'breaking_rank': profile.breaking_rank,
            'unimodal': is_rank_unimodal(interval),
            'strongly_sperner': is_strongly_sperner(interval, self.config.max_oracle_elements).to_dict(),
            'lattice': is_lattice(interval),
        }
        if args.chains is not None:
            payload['chains'] = rank_intersecting_chains(interval, args.chains).to_dict(self.config.compact)
        return self.render(payload)

    def cmd_export(self, args) -> str:
        sigma, tau = self.parse(args.sigma), self.parse(args.tau)
        if args.dot_labeled:
            return self._labeled_dot(sigma, tau)
        interval = build_interval(sigma, tau)
        if args.json:
            return dumps_json(to_json_dict(interval, self.config.compact))
        return to_dot(interval, compact=self.config.compact)

    def _labeled_dot(self, sigma: Permutation, tau: Permutation) -> str:
        interval = build_interval(sigma, tau)
        labels = edge_label_sets(interval, self.config.max_cl_chains)
        return to_dot(interval, edge_labels=labels, compact=self.config.compact)

    # ------------------------------------------------------------------
    # Enumeration and sampling commands
    # ------------------------------------------------------------------

    def cmd_table(self, args) -> str:
        if args.statistic == 'exterior':
            table = exterior_length_table(args.n_max, self.config.threads, self.config.max_exhaustive_n,
                                          n_min=args.n_min)
        else:
            table = distribution_table(args.statistic, args.n_min, args.n_max,
                                       workers=self.config.threads, max_n=self.config.max_exhaustive_n)
        if self.config.output_format == 'csv':
            return table.to_csv()
        if self.config.output_format == 'text':
            return table.to_frame().to_string() + '\n'
        return dumps_json(table.to_dict())

    def cmd_sequence(self, args) -> str:
        workers, max_n = self.config.threads, self.config.max_exhaustive_n
        if args.name == 'no-carrier':
            start = 2
            values = no_carrier_counts(args.n_max, workers, max_n)
        else:
            start = 2 if args.name == 'non-overlapping' else 4
            table = exterior_length_table(args.n_max, workers, max_n, n_min=start)
            k_of = (lambda n: 1) if args.name == 'non-overlapping' else (lambda n: n - 2)
            values = [table.row(n).get(k_of(n), 0) for n in table.ns()]

        if self.config.output_format == 'csv':
            frame = pd.DataFrame({'n': range(start, start + len(values)), 'value': values})
            return frame_to_csv(frame, index=False)
        return self.render({'sequence': args.name, 'n_min': start, 'values': values})

    def cmd_census(self, args) -> str:
        sigma = self.parse(args.sigma) if args.sigma else None
        if args.sample:
            estimate = sample_statistic(args.n, args.sample, self.config.seed, _sample_name(args.stat), sigma,
                                        workers=self.config.threads, chunk_size=self.config.chunk_size)
            lines = []
            if args.records:
                for record in sample_records(args.n, args.sample, self.config.seed, args.stat, sigma,
                                             chunk_size=self.config.chunk_size):
                    lines.append(dumps_json(record, one_line=True))
            lines.append(self.render(estimate.to_dict()))
            return ''.join(lines)

        check_exhaustive(args.n, self.config.max_exhaustive_n)
        lines = []
        if args.records:
            for record in census_records(args.n, args.stat, sigma, self.config.max_exhaustive_n):
                lines.append(dumps_json(record, one_line=True))
        table = distribution_table(args.stat, args.n, args.n, sigma,
                                   workers=self.config.threads, max_n=self.config.max_exhaustive_n)
        counts = table.row(args.n)
        counted = sum(counts.values())
        summary = {
            'n': args.n,
            'statistic': args.stat,
            'sigma': str(sigma) if sigma else None,
            'total': factorial(args.n),
            'counted': counted,
            'counts': {str(k): c for k, c in counts.items()},
        }
        if args.stat != 'exterior-length' and counted:
            summary['fraction'] = f"{counts.get(1, 0)}/{counted}"
        lines.append(self.render(summary))
        return ''.join(lines)

    def cmd_sample(self, args) -> str:
        sigma = self.parse(args.sigma) if args.sigma else None
        estimate = sample_statistic(args.n, args.size, self.config.seed, args.stat, sigma,
                                    workers=self.config.threads, chunk_size=self.config.chunk_size)
        return self.render(estimate.to_dict())


def _sample_name(stat: str) -> str:
    return 'exterior-length-mean' if stat == 'exterior-length' else stat


def build_parser() -> argparse.ArgumentParser:
    """Argument parser; global flags are accepted before or after the subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', dest='output_format', choices=['json', 'csv', 'text'],
                        default=argparse.SUPPRESS,
                        help='Output format; csv only for table and sequence')
    common.add_argument('--compact', action='store_true', default=argparse.SUPPRESS,
                        help='Digit-string permutations (n <= 9); JSON layout is unchanged')
    common.add_argument('--seed', type=int, default=argparse.SUPPRESS, help='Master seed for sampling')
    common.add_argument('--threads', type=_positive_int, default=argparse.SUPPRESS, help='Worker processes')
    common.add_argument('--max-chains', type=_positive_int, default=argparse.SUPPRESS,
                        help='Cap on maximal chain enumeration')
    common.add_argument('--max-oracle', type=_positive_int, default=argparse.SUPPRESS,
                        help='Cap on k-family oracle interval size')
    common.add_argument('--config', default=argparse.SUPPRESS, help='Configuration directory')
    common.add_argument('--output', default=argparse.SUPPRESS, help='Write output to this file')
    common.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        default=argparse.SUPPRESS, help='Logging level')
    common.add_argument('--log-dir', default=argparse.SUPPRESS, help='Directory for JSON log files')

    parser = argparse.ArgumentParser(prog='consec_poset', parents=[common],
                                     description='Consecutive pattern poset toolkit')
    sub = parser.add_subparsers(dest='command', required=True)

    def interval_command(name: str, help_text: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        cmd.add_argument('sigma', help='Lower permutation, e.g. 12 or 1,2')
        cmd.add_argument('tau', help='Upper permutation, e.g. 213546 or 2,1,3,5,4,6')
        return cmd

    cmd = interval_command('classify', 'Full report on [sigma, tau]')
    cmd.add_argument('--dot-labeled', action='store_true', help='Emit the edge-labelled Hasse diagram')

    cmd = interval_command('mobius', 'Möbius function mu(sigma, tau)')
    cmd.add_argument('--trace', action='store_true', help='Include the recursion trace')
    cmd.add_argument('--oracle', action='store_true', help='Cross-check with the definitional oracle')

    cmd = interval_command('ranks', 'Rank sizes, Sperner and lattice verdicts')
    cmd.add_argument('--chains', type=_positive_int, help='Emit the rank-intersecting chain family for i')

    cmd = interval_command('export', 'Hasse diagram as DOT or JSON')
    style = cmd.add_mutually_exclusive_group()
    style.add_argument('--dot', action='store_true', help='Plain DOT (default)')
    style.add_argument('--dot-labeled', action='store_true', help='DOT with chain-edge labels')
    style.add_argument('--json', action='store_true', help='JSON interval dump')

    cmd = sub.add_parser('table', parents=[common], help='Exact distribution table over S_n')
    cmd.add_argument('statistic', choices=['exterior'] + sorted(k for k, s in STATISTICS.items()
                                                                  if not s.needs_sigma and k != 'exterior-length'))
    cmd.add_argument('--n-max', type=_positive_int, required=True)
    cmd.add_argument('--n-min', type=_positive_int, default=2)

    cmd = sub.add_parser('sequence', parents=[common], help='Integer sequences indexed by n')
    cmd.add_argument('name', choices=SEQUENCES)
    cmd.add_argument('--n-max', type=_positive_int, required=True)

    cmd = sub.add_parser('census', parents=[common], help='Per-permutation census over S_n')
    cmd.add_argument('--n', type=_positive_int, required=True)
    cmd.add_argument('--sigma', help='Pattern for sigma-dependent statistics')
    cmd.add_argument('--stat', choices=sorted(STATISTICS), required=True)
    cmd.add_argument('--records', action='store_true', help='Stream one JSON line per permutation first')
    cmd.add_argument('--sample', type=_positive_int, help='Sample this many permutations instead')

    cmd = sub.add_parser('sample', parents=[common], help='Seeded Monte Carlo estimate')
    cmd.add_argument('--n', type=_positive_int, required=True)
    cmd.add_argument('--size', type=_positive_int, required=True)
    cmd.add_argument('--stat', choices=sorted(SAMPLE_STATISTICS), required=True)
    cmd.add_argument('--sigma', help='Pattern for sigma-dependent statistics')
    cmd.add_argument('--json', action='store_true', help='JSON output (the default)')

    return parser


COMMANDS = {
    'classify': PosetToolkit.cmd_classify,
    'mobius': PosetToolkit.cmd_mobius,
    'ranks': PosetToolkit.cmd_ranks,
    'export': PosetToolkit.cmd_export,
    'table': PosetToolkit.cmd_table,
    'sequence': PosetToolkit.cmd_sequence,
    'census': PosetToolkit.cmd_census,
    'sample': PosetToolkit.cmd_sample,
}


def run(argv: Optional[List[str]] = None, environ=None) -> int:
    """Parse arguments, run one subcommand and return the exit code."""
    args = build_parser().parse_args(argv)
    opts = vars(args)
    logger = get_logger('cli')

    try:
        loader = ConfigLoader(config_dir=opts.get('config', 'config'), environ=environ)
        config = loader.build_run_config(
            output_format=opts.get('output_format'),
            compact=opts.get('compact'),
            seed=opts.get('seed'),
            threads=opts.get('threads'),
            max_chains=opts.get('max_chains'),
            max_oracle_elements=opts.get('max_oracle'),
            log_level=opts.get('log_level'),
            log_dir=opts.get('log_dir'),
        )
    except PosetError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code

    initialize_logging(log_dir=config.log_dir, log_level=getattr(logging, config.log_level.upper(), logging.INFO))
    logger = get_logger('cli')

    try:
        if config.output_format == 'csv' and args.command not in CSV_COMMANDS:
            raise PreconditionError(f"--format csv applies to {', '.join(CSV_COMMANDS)} only, not {args.command}")
        toolkit = PosetToolkit(config)
        text = COMMANDS[args.command](toolkit, args)
        emit(text, opts.get('output'))
        return toolkit.exit_code
    except PosetError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        return EXIT_UNEXPECTED
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        return EXIT_UNEXPECTED


def main():
    """Main entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
