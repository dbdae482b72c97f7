# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

"""Command line front end.

Subcommands: ``enumerate``, ``analyze``, ``simulate`` and ``sweep``.
Exit status: 0 continue (or success), 3 abort, 2 usage, configuration
or output error, 1 internal fault.
"""

import argparse
import logging
import math
import os
import re
import sys

import numpy as np

from . import __version__
from .analysis import (
    HOLEVO_METHODS,
    binary_entropy,
    code_automorphisms,
    eve_success_probability,
    guess_outcome_distribution,
    guessed_set_with_overlap,
    holevo_physical_model,
    holevo_sweep,
    intercept_resend_mutual_info,
    intercept_resend_model,
    multiphoton_prob,
    pns_block_leak_prob,
    poisson_pmf,
)
from .config import (
    ConfigError,
    config_from_mapping,
    config_to_mapping,
    read_config,
)
from .output import (
    RunManifest,
    write_csv,
    write_manifest,
    write_records,
    write_report,
)
from .patterns import (
    PatternError,
    all_patterns,
    partners,
    pattern_set_by_id,
    valid_pattern_sets,
)
from .protocol import Decision, run_session

logger = logging.getLogger(__name__)

EXIT_CONTINUE = 0
EXIT_FAULT = 1
EXIT_USAGE = 2
EXIT_ABORT = 3

DEFAULT_MUS = (0.0, 0.05, 0.1, 0.2, 0.5)

SWEEP_AXES = {
    'distance_km': 'distance_km',
    'per_qubit_flip_prob': 'per_qubit_flip_prob',
    'mu': 'mean_photon_number',
    'eve_knowledge': 'eve_knowledge',
}

SWEEP_COLUMNS = ('axis_value', 'master_seed', 'sift_rate', 'mqer',
                 'decision', 'eve_success')


class UsageError(Exception):
    """Bad command line input; reported with exit status 2."""


def _output_path(args, name):
    return name if os.path.isabs(name) else os.path.join(args.out, name)


def _prepare_out(args):
    try:
        os.makedirs(args.out, exist_ok=True)
    except OSError as exc:
        raise UsageError('cannot create output directory {}: {}'.format(
            args.out, exc.strerror or exc)) from exc


def _remove_quietly(paths):
    for path in paths:
        try:
            os.remove(path)
        except OSError:
            pass


def _load_config(args, **extra):
    if not args.config:
        raise UsageError('--config is required for {}'.format(args.command))
    return read_config(
        args.config,
        master_seed=args.seed,
        num_blocks=args.blocks,
        mqer_threshold=args.threshold,
        test_fraction=args.test_fraction,
        **extra,
    )


def cmd_enumerate(args):
    """Write the pattern table and optionally the valid-set table."""
    _prepare_out(args)
    written = []
    try:
        patterns_path = _output_path(args, 'patterns.csv')
        written.append(patterns_path)
        write_csv(patterns_path, ('pattern', 'partners'),
                  ((pattern, len(partners(pattern)))
                   for pattern in all_patterns()))

        if args.sets_csv:
            sets_path = _output_path(args, args.sets_csv)
            written.append(sets_path)
            write_csv(sets_path, ('set_id', 'perm_a', 'perm_b', 'distance'),
                      ((set_id, pattern_set.first, pattern_set.second,
                        pattern_set.distance)
                       for set_id, pattern_set
                       in enumerate(valid_pattern_sets())))
    except OSError as exc:
        _remove_quietly(written)
        raise UsageError('cannot write {}: {}'.format(
            written[-1], exc.strerror or exc)) from exc

    counts = {len(partners(pattern)) for pattern in all_patterns()}
    print('patterns={} sets={} partners={}'.format(
        len(all_patterns()), len(valid_pattern_sets()),
        ','.join(str(count) for count in sorted(counts))))
    return EXIT_CONTINUE


def _key_suffix(value):
    return re.sub(r'[^A-Za-z0-9]', '_', '{:g}'.format(value))


def analysis_report(set_id=0, mus=DEFAULT_MUS, method='gram'):
    """Closed-form quantities and exact models as a flat mapping."""
    pattern_set = pattern_set_by_id(set_id)
    report = {}

    for success in (0.75, 0.625, 0.5):
        suffix = _key_suffix(success)
        report['h_' + suffix] = binary_entropy(success)
        report['mutual_info_' + suffix] = intercept_resend_mutual_info(success)

    guess = guess_outcome_distribution(pattern_set)
    for name, fraction in guess._asdict().items():
        report['guess_{}'.format(name)] = float(fraction)
        report['guess_{}_exact'.format(name)] = str(fraction)

    for k in (2, 1, 0):
        report['eve_success_k{}'.format(k)] = float(eve_success_probability(k))

    report['set_id'] = set_id
    report['secret_set'] = str(pattern_set)
    holevo = holevo_physical_model(pattern_set, method)
    report['chi_naive_model'] = holevo.chi_naive_model
    report['chi_physical_model'] = holevo.chi_physical_model
    report['s_mean'] = holevo.s_mean
    report['s_zero'] = holevo.s_zero
    report['s_one'] = holevo.s_one
    report['overlap_00'] = holevo.overlap_00
    report['overlap_01'] = holevo.overlap_01

    report['code_automorphisms'] = len(code_automorphisms())
    models = [('uniform', None)] + [
        ('k{}'.format(k), tuple(guessed_set_with_overlap(pattern_set, k)))
        for k in (2, 1, 0)
    ]
    for name, eve_patterns in models:
        model = intercept_resend_model(pattern_set, eve_patterns)
        report['model_eve_success_' + name] = model.eve_success
        report['model_sifted_mqer_' + name] = model.sifted_mqer
        report['model_wrong_pattern_flip_' + name] = \
            model.wrong_pattern_flip_rate
        report['model_fair_coin_success_' + name] = model.fair_coin_success
        report['model_fair_coin_mqer_' + name] = model.fair_coin_mqer

    for mu in mus:
        suffix = _key_suffix(mu)
        report['poisson_p0_mu_' + suffix] = poisson_pmf(0, mu)
        report['multiphoton_mu_' + suffix] = multiphoton_prob(mu)
        report['pns_leak_mu_' + suffix] = pns_block_leak_prob(mu)
    return report


def cmd_analyze(args):
    mus = args.mu if args.mu else DEFAULT_MUS
    if any(not math.isfinite(mu) or mu < 0 for mu in mus):
        raise UsageError('--mu values must be finite and >= 0')
    try:
        report = analysis_report(args.set_id, mus, args.chi_method)
    except PatternError as exc:
        raise UsageError(str(exc)) from exc

    _prepare_out(args)
    manifest = RunManifest(command='analyze', tool_version=__version__,
                           master_seed=0,
                           config={'set_id': args.set_id,
                                   'mu': list(mus),
                                   'chi_method': args.chi_method})
    if args.chi_csv:
        rows = holevo_sweep(args.chi_method)
        chis = [row.chi_physical for row in rows]
        report['chi_physical_min'] = min(chis)
        report['chi_physical_max'] = max(chis)
        report['chi_physical_mean'] = math.fsum(chis) / len(chis)
        chi_path = _output_path(args, args.chi_csv)
        write_csv(chi_path,
                  ('set_id', 'chi_physical_bits', 'overlap_00', 'overlap_01'),
                  rows)
        manifest.add_output(chi_path)

    report_path = _output_path(args, 'analysis.txt')
    write_report(report_path, report)
    manifest.add_output(report_path)
    manifest.finish()
    write_manifest(_output_path(args, 'manifest.json'), manifest)

    with open(report_path, encoding='utf-8') as file:
        sys.stdout.write(file.read())
    return EXIT_CONTINUE


def cmd_simulate(args):
    config = _load_config(args)
    _prepare_out(args)

    manifest = RunManifest(command='simulate', tool_version=__version__,
                           master_seed=config.master_seed,
                           config=config_to_mapping(config))
    report, records = run_session(config, workers=args.workers)
    summary = report.as_dict()

    records_path = _output_path(args, 'records.tsv')
    report_path = _output_path(args, 'report.txt')
    write_records(records_path, records)
    write_report(report_path, summary)
    manifest.add_output(records_path)
    manifest.add_output(report_path)
    manifest.finish()
    write_manifest(_output_path(args, 'manifest.json'), manifest)

    print('decision={decision} mqer={mqer} sifted={sifted} tested={tested}'
          .format(decision=report.decision.value,
                  mqer='{:.6g}'.format(report.mqer_estimate),
                  sifted=report.blocks_sifted,
                  tested=report.blocks_tested))
    if report.decision is Decision.ABORT:
        return EXIT_ABORT
    return EXIT_CONTINUE


def sweep_seed(master_seed, index):
    """Seed of the ``index``-th run of a sweep."""
    state = np.random.SeedSequence([master_seed, index]).generate_state(
        2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


def _sweep_values(args):
    values = [value.strip() for value in ','.join(args.values).split(',')
              if value.strip()]
    if not values:
        raise UsageError('--values needs at least one value')
    if args.axis == 'eve_knowledge':
        return values

    numbers = []
    for value in values:
        try:
            number = float(value)
        except ValueError as exc:
            raise UsageError('invalid {} value {!r}'.format(
                args.axis, value)) from exc
        if not math.isfinite(number):
            raise UsageError('{} values must be finite'.format(args.axis))
        numbers.append(number)
    return numbers


def cmd_sweep(args):
    values = _sweep_values(args)
    base = config_to_mapping(_load_config(args))
    _prepare_out(args)

    key = SWEEP_AXES[args.axis]
    configs = []
    for index, value in enumerate(values):
        mapping = dict(base)
        mapping[key] = value
        mapping['master_seed'] = sweep_seed(int(base['master_seed']), index)
        if args.axis == 'eve_knowledge':
            mapping['eve_kind'] = 'intercept_resend'
        configs.append(config_from_mapping(mapping))

    manifest = RunManifest(command='sweep', tool_version=__version__,
                           master_seed=int(base['master_seed']),
                           config=dict(base, axis=args.axis,
                                       values=[str(v) for v in values]))
    csv_path = _output_path(args, 'sweep.csv')
    rows = []
    error = None
    for value, config in zip(values, configs):
        logger.info('Sweep %s=%s', args.axis, value)
        try:
            report, _ = run_session(config, workers=args.workers)
        except Exception as exc:  # noqa: B902
            logger.exception('Sweep run %s=%s failed', args.axis, value)
            error = '{}={}: {}'.format(args.axis, value, exc)
            break
        rows.append((value, config.master_seed, report.sift_rate,
                     report.mqer_estimate, report.decision.value,
                     report.eve_success_rate))

    write_csv(csv_path, SWEEP_COLUMNS, rows)
    manifest.add_output(csv_path)
    manifest.finish(complete=error is None, error=error)
    write_manifest(_output_path(args, 'manifest.json'), manifest)

    with open(csv_path, encoding='utf-8') as file:
        sys.stdout.write(file.read())
    return EXIT_FAULT if error else EXIT_CONTINUE


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, help='master seed override')
    common.add_argument('--out', default='.', help='output directory')
    common.add_argument('--config', help='session configuration file')
    common.add_argument('--blocks', type=int, help='number of blocks')
    common.add_argument('--threshold', type=float, help='MQER threshold')
    common.add_argument('--test-fraction', type=float,
                        help='fraction of sifted blocks disclosed for testing')
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='more logging (repeat for debug output)')

    parser = argparse.ArgumentParser(
        prog='pqkd',
        description='Pattern-based QKD over the five-qubit code.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s {}'.format(__version__))
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    enumerate_parser = commands.add_parser(
        'enumerate', parents=[common], help='count patterns and pattern sets')
    enumerate_parser.add_argument(
        '--sets-csv', nargs='?', const='sets.csv', default=None,
        help='also write the valid-set table (default name sets.csv)')
    enumerate_parser.set_defaults(handler=cmd_enumerate)

    analyze_parser = commands.add_parser(
        'analyze', parents=[common], help='closed-form security quantities')
    analyze_parser.add_argument('--mu', type=float, action='append',
                                help='mean photon number (repeatable)')
    analyze_parser.add_argument('--set-id', type=int, default=0,
                                help='pattern set for the Holevo quantities')
    analyze_parser.add_argument('--chi-csv', nargs='?', const='chi.csv',
                                default=None,
                                help='write the Holevo quantity of every set')
    analyze_parser.add_argument('--chi-method', choices=HOLEVO_METHODS,
                                default='gram')
    analyze_parser.set_defaults(handler=cmd_analyze)

    simulate_parser = commands.add_parser(
        'simulate', parents=[common], help='run one protocol session')
    simulate_parser.add_argument('--workers', type=int, default=1)
    simulate_parser.set_defaults(handler=cmd_simulate)

    sweep_parser = commands.add_parser(
        'sweep', parents=[common], help='run one session per axis value')
    sweep_parser.add_argument('--axis', choices=sorted(SWEEP_AXES),
                              required=True)
    sweep_parser.add_argument('--values', nargs='+', required=True,
                              help='axis values, space or comma separated')
    sweep_parser.add_argument('--workers', type=int, default=1)
    sweep_parser.set_defaults(handler=cmd_sweep)
    return parser


def _configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level,
                        format='%(levelname)s %(name)s: %(message)s')
    logging.captureWarnings(True)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    try:
        return args.handler(args)
    except (UsageError, ConfigError) as exc:
        print('{}: error: {}'.format(parser.prog, exc), file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print('{}: error: {}'.format(parser.prog, exc), file=sys.stderr)
        return EXIT_USAGE
    except Exception:  # noqa: B902
        logger.exception('Internal fault')
        return EXIT_FAULT
