"""
The ``gaugecool`` command line tool.

.. autosummary::

    main
    build_parser
    verify_report

Subcommands: ``chain``, ``reduced``, ``exact``, ``region``, ``flow`` and
``cool-bench``. Every subcommand accepts ``--config FILE`` with a JSON
object of settings; flags given on the command line override it. Reports
are JSON documents, tables are CSV files with a header row:

==================  ==============================
``*-series.csv``    ``t,delta_f``
``*-samples.csv``   ``x,y``
``*-flow.csv``      ``x,y,kr,ki,norm``
``*-boundary.csv``  ``a,b``
==================  ==============================

Files go to ``--output-dir``, ``$GAUGECOOL_OUTPUT_DIR`` or the current
directory and are written atomically. The exit status is ``0`` on success,
``1`` when a run diverged or escaped and ``2`` for invalid configurations.

"""
import argparse
import dataclasses
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from typing import (
    Any,
    Callable,
    Dict,
    IO,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from gaugecool.config import (
    CONFIGS,
    BenchConfig,
    ChainConfig,
    ExactConfig,
    ExperimentConfig,
    FlowConfig,
    ReducedConfig,
    RegionConfig,
    output_dir,
)
from gaugecool.cooling import CoolingStrategy
from gaugecool.exact import QuadratureSpec, su2_expectation, su3_expectation
from gaugecool.exceptions import ConfigError, GaugeCoolError
from gaugecool.langevin import ChainReport, run_chain
from gaugecool.model import ChainParams
from gaugecool.reduced import (
    flow_field,
    localization_f,
    region_boundary,
    run_reduced,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_EXCURSION = 1
EXIT_CONFIG = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as configuration errors (exit status 2)."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f'{self.prog}: error: {message}\n')


def _add(parser: argparse.ArgumentParser, *flags: str, **kwargs: Any) -> None:
    # Unset flags stay None so they never override the config file.
    kwargs.setdefault('default', None)
    parser.add_argument(*flags, **kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='gaugecool',
        description='Complex Langevin with gauge cooling for Polyakov chains.',
    )
    parser.add_argument(
        '-v', '--verbose', action='count', default=0,
        help='more log output (repeatable)',
    )
    parser.add_argument(
        '-q', '--quiet', action='store_true', help='only log errors'
    )
    parser.add_argument(
        '--verify', metavar='REPORT',
        help='re-read a report and check it against its configuration',
    )
    parser.add_argument(
        '--output-dir',
        help='directory for output files '
             '(default: $GAUGECOOL_OUTPUT_DIR or .)',
    )
    commands = parser.add_subparsers(dest='command')

    def command(name: str, help: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help)
        sub.add_argument('--config', help='JSON file with settings')
        return sub

    def couplings(sub: argparse.ArgumentParser) -> None:
        _add(sub, '--beta1', dest='beta1', help='coupling of tr U')
        _add(sub, '--beta2', dest='beta2', help='coupling of tr U^-1')
        _add(sub, '--beta', help='beta of (beta, kappa, mu)')
        _add(sub, '--kappa', type=float)
        _add(sub, '--mu', type=float)

    sub = command('chain', 'run a complex Langevin chain')
    _add(sub, '--n', type=int, help='group dimension')
    _add(sub, '--N', dest='N', type=int, help='number of links')
    couplings(sub)
    _add(sub, '--cooling', choices=('none', 'gradient', 'optimal'))
    _add(sub, '--alpha', type=float, help='gradient descent step factor')
    _add(sub, '--iters', type=int, help='gradient descent steps per step')
    _add(sub, '--dt', type=float)
    _add(sub, '--burn-in-time', dest='burn_in_time', type=float)
    _add(sub, '--sample-interval', dest='sample_interval', type=float)
    _add(sub, '--num-samples', dest='num_samples', type=int)
    _add(sub, '--seed', type=int)
    _add(sub, '--ks', help='comma separated observable powers')
    _add(sub, '--delta-f-stride', dest='delta_f_stride', type=int)
    _add(sub, '--samples', dest='record_samples', action='store_const',
         const=True, help='also write the eigen-phase samples')
    _add(sub, '--name', help='stem of the output files')

    sub = command('reduced', 'run the reduced SU(2) SDE')
    _add(sub, '--a', dest='A', type=float, help='real part of beta')
    _add(sub, '--b', dest='B', type=float, help='imaginary part of beta')
    _add(sub, '--dt', type=float)
    _add(sub, '--burn-in-time', dest='burn_in_time', type=float)
    _add(sub, '--sample-interval', dest='sample_interval', type=float)
    _add(sub, '--num-samples', dest='num_samples', type=int)
    _add(sub, '--seed', type=int)
    _add(sub, '--ks', help='comma separated observable powers')
    _add(sub, '--x0', type=float)
    _add(sub, '--y0', type=float)
    _add(sub, '--y-bound', dest='y_bound', type=float)
    _add(sub, '--cap-factor', dest='cap_factor', type=float)
    _add(sub, '--samples', dest='record_samples', action='store_const',
         const=True, help='also write the (x, y) samples')
    _add(sub, '--name', help='stem of the output files')

    sub = command('exact', 'print an exact expectation value')
    _add(sub, '--group', choices=('su2', 'su3'))
    _add(sub, '--k', type=int)
    couplings(sub)
    _add(sub, '--points', type=int, help='grid points per angle')

    sub = command('region', 'query or trace the localized region')
    _add(sub, '--a', type=float)
    _add(sub, '--b', type=float)
    _add(sub, '--a-min', dest='a_min', type=float)
    _add(sub, '--a-max', dest='a_max', type=float)
    _add(sub, '--a-count', dest='a_count', type=int)
    _add(sub, '--tol', type=float)
    _add(sub, '--eta-samples', dest='eta_samples', type=int)
    _add(sub, '--name', help='stem of the output files')

    sub = command('flow', 'tabulate the reduced drift field')
    _add(sub, '--a', dest='A', type=float)
    _add(sub, '--b', dest='B', type=float)
    _add(sub, '--x-count', dest='x_count', type=int)
    _add(sub, '--y-count', dest='y_count', type=int)
    _add(sub, '--bounds', help='x_min,x_max,y_min,y_max')
    _add(sub, '--name', help='stem of the output files')

    sub = command(
        'cool-bench', 'compare cooling strategies on one noise stream'
    )
    _add(sub, '--n', type=int)
    _add(sub, '--N', dest='N', type=int)
    couplings(sub)
    _add(sub, '--dt', type=float)
    _add(sub, '--total-time', dest='total_time', type=float)
    _add(sub, '--alphas', help='comma separated gradient step factors')
    _add(sub, '--iters', type=int)
    _add(sub, '--seed', type=int)
    _add(sub, '--delta-f-stride', dest='delta_f_stride', type=int)
    _add(sub, '--workers', type=int, help='worker processes')
    _add(sub, '--name', help='stem of the output files')

    return parser


def _atomic_write(path: str, write: Callable[[IO[str]], None]) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix='.tmp')
    try:
        with os.fdopen(fd, 'w') as f:
            write(f)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_json(path: str, data: Mapping[str, Any]) -> None:
    def write(f: IO[str]) -> None:
        json.dump(data, f, indent=2)
        f.write('\n')
    _atomic_write(path, write)
    logger.info('wrote %s', path)


def write_csv(path: str, header: str, rows: Any) -> None:
    rows = np.asarray(rows, dtype=float).reshape(-1, len(header.split(',')))

    def write(f: IO[str]) -> None:
        np.savetxt(f, rows, delimiter=',', header=header, comments='',
                   fmt='%.17g')
    _atomic_write(path, write)
    logger.info('wrote %s', path)


def _with_config(
    report: ChainReport, config: ExperimentConfig
) -> ChainReport:
    meta = dict(report.meta)
    meta['command'] = config.command
    meta['config'] = config.to_dict()
    return dataclasses.replace(report, meta=meta)


def _write_report(
    directory: str, stem: str, report: ChainReport, series: bool
) -> None:
    write_json(os.path.join(directory, f'{stem}.json'), report.to_dict())
    if series:
        write_csv(
            os.path.join(directory, f'{stem}-series.csv'), 't,delta_f',
            report.delta_f_series,
        )
    if report.samples is not None:
        write_csv(
            os.path.join(directory, f'{stem}-samples.csv'), 'x,y',
            [(s.real, s.imag) for s in report.samples],
        )


def _summary(report: ChainReport) -> str:
    lines = []
    for k, estimate in report.estimates.items():
        mean, err = estimate.mean, estimate.stderr
        lines.append(
            f'O_{k} = {mean.real:.4f}{mean.imag:+.4f}i '
            f'(+- {err.real:.4f}, {err.imag:.4f})'
        )
    if report.diverged:
        lines.append(f'diverged at t={report.end_time:g}')
    if report.escaped:
        lines.append(f'escaped at t={report.end_time:g}')
    return '\n'.join(lines)


def _run_chain(config: ChainConfig, directory: str) -> int:
    report = run_chain(
        config.params(), config.schedule(), config.strategy(), config.ks,
        delta_f_stride=config.delta_f_stride,
        divergence_threshold=config.divergence_threshold,
        record_samples=config.record_samples,
    )
    report = _with_config(report, config)
    _write_report(directory, config.name, report, series=True)
    print(_summary(report))
    return EXIT_OK if report.ok else EXIT_EXCURSION


def _run_reduced(config: ReducedConfig, directory: str) -> int:
    report = run_reduced(
        config.params(), config.schedule(), config.ks,
        initial=config.initial(),
        y_bound=config.y_bound,
        cap_factor=config.cap_factor,
        record_samples=config.record_samples,
    )
    report = _with_config(report, config)
    _write_report(directory, config.name, report, series=False)
    print(_summary(report))
    print(f'max |y| = {report.max_abs_y:.4f}, capped steps: '
          f'{report.capped_steps}')
    return EXIT_OK if report.ok else EXIT_EXCURSION


def _format_complex(value: complex) -> str:
    if abs(value.imag) < 5e-5:
        return f'{value.real:.4f}'
    return f'{value.real:.4f}{value.imag:+.4f}i'


def _run_exact(config: ExactConfig, directory: str) -> int:
    quad = QuadratureSpec(config.points)
    if config.group == 'su3':
        beta1, beta2 = config.couplings()
        value = su3_expectation(config.k, beta1, beta2, quad)
    else:
        value = su2_expectation(config.k, config.su2_beta(), quad)
    print(_format_complex(value))
    return EXIT_OK


def _run_region(config: RegionConfig, directory: str) -> int:
    if config.is_query:
        assert config.a is not None and config.b is not None
        value = localization_f(config.a, config.b, config.eta_samples)
        print(f'localized: {str(value < 0).lower()}')
        print(f'f: {value:.6g}')
        return EXIT_OK
    a_values = np.linspace(config.a_min, config.a_max, config.a_count)
    boundary = region_boundary(a_values, config.tol, config.eta_samples)
    write_csv(
        os.path.join(directory, f'{config.name}-boundary.csv'), 'a,b',
        np.column_stack([a_values, boundary]),
    )
    return EXIT_OK


def _run_flow(config: FlowConfig, directory: str) -> int:
    field = flow_field(
        config.A, config.B, config.x_count, config.y_count,
        tuple(config.bounds),  # type: ignore[arg-type]
    )
    write_csv(
        os.path.join(directory, f'{config.name}-flow.csv'),
        'x,y,kr,ki,norm', field.rows(),
    )
    skipped = int(field.singular.sum())
    if skipped:
        logger.info('skipped %d singular cells', skipped)
    return EXIT_OK


def _bench_one(
    job: Tuple[str, ChainParams, Any, CoolingStrategy, int]
) -> Tuple[str, ChainReport]:
    label, params, schedule, strategy, stride = job
    report = run_chain(
        params, schedule, strategy, [1], delta_f_stride=stride
    )
    return label, report


def run_bench(config: BenchConfig) -> Dict[str, ChainReport]:
    """Run every strategy of *config* on the same noise stream. The chains
    are independent, so *workers* processes give the same reports as a
    sequential run."""
    params, schedule = config.params(), config.schedule()
    jobs = [
        (label, params, schedule, strategy, config.delta_f_stride)
        for label, strategy in config.strategies().items()
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(_bench_one, jobs))
    else:
        results = [_bench_one(job) for job in jobs]
    return dict(results)


def _run_bench(config: BenchConfig, directory: str) -> int:
    reports = run_bench(config)
    summary: Dict[str, Any] = {
        'meta': {
            'command': config.command,
            'config': config.to_dict(),
            'schedule': config.schedule().to_dict(),
        },
        'runs': {},
    }
    for label, report in reports.items():
        write_csv(
            os.path.join(directory, f'{config.name}-{label}-series.csv'),
            't,delta_f', report.delta_f_series,
        )
        max_delta_f = max(d for _, d in report.delta_f_series)
        summary['runs'][label] = {
            'diverged': report.diverged,
            'end_time': report.end_time,
            'max_delta_f': max_delta_f,
        }
        print(f'{label}: max delta_f {max_delta_f:.3e}'
              + (f', diverged at t={report.end_time:g}'
                 if report.diverged else ''))
    write_json(os.path.join(directory, f'{config.name}.json'), summary)
    if any(report.diverged for report in reports.values()):
        return EXIT_EXCURSION
    return EXIT_OK


RUNNERS: Dict[str, Callable[[Any, str], int]] = {
    'chain': _run_chain,
    'reduced': _run_reduced,
    'exact': _run_exact,
    'region': _run_region,
    'flow': _run_flow,
    'cool-bench': _run_bench,
}


def verify_report(path: str) -> List[str]:
    """Re-read the report at *path* and return the problems found: its
    configuration must validate and its contents must match it."""
    with open(path) as f:
        data = json.load(f)
    meta = data.get('meta', {})
    command = meta.get('command')
    if command not in VERIFIERS:
        return [f'unknown report command {command!r}.']
    config = CONFIGS[command].from_sources(meta.get('config', {}))

    problems = []
    if 'seed' not in meta.get('schedule', {}):
        problems.append('report does not record its seed.')
    elif meta['schedule']['seed'] != config.seed:  # type: ignore
        problems.append('seed differs from the configuration.')
    return problems + VERIFIERS[command](data, config)


def _verify_run(data: Dict[str, Any], config: Any) -> List[str]:
    report = ChainReport.from_dict(data)
    problems = []
    if sorted(report.estimates) != sorted(config.ks):
        problems.append('observables differ from the configuration.')
    expected = config.num_samples
    if report.ok and report.num_samples != expected:
        problems.append(
            f'{report.num_samples} samples recorded, {expected} expected.'
        )
    if not report.ok and report.num_samples > expected:
        problems.append('aborted run has too many samples.')
    return problems


def _verify_bench(data: Dict[str, Any], config: Any) -> List[str]:
    runs = data.get('runs', {})
    expected = sorted(config.strategies())
    if sorted(runs) != expected:
        return [f'runs {sorted(runs)} differ from the strategies {expected}.']
    problems = []
    for label, run in runs.items():
        if run['end_time'] > config.total_time + config.dt / 2:
            problems.append(f'{label} ran past the total time.')
        elif (not run['diverged']
              and run['end_time'] < config.total_time - config.dt / 2):
            problems.append(f'{label} stopped early without diverging.')
    return problems


VERIFIERS: Dict[str, Callable[[Dict[str, Any], Any], List[str]]] = {
    'chain': _verify_run,
    'reduced': _verify_run,
    'cool-bench': _verify_bench,
}
"""Checks per report command. ``exact``, ``region`` and ``flow`` print or
write tables only, so they have no report to verify."""


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(
        level=level, format='%(asctime)s %(name)s %(levelname)s %(message)s'
    )


def _load_config_file(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        return {}
    try:
        with open(path) as f:
            values = json.load(f)
    except (OSError, ValueError) as exc:
        raise ConfigError('config', f'cannot read {path}: {exc}') from None
    if not isinstance(values, dict):
        raise ConfigError('config', f'{path} must hold a JSON object.')
    return values


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of ``gaugecool``; returns the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose, args.quiet)

    try:
        if args.verify is not None:
            problems = verify_report(args.verify)
            for problem in problems:
                print(f'{args.verify}: {problem}', file=sys.stderr)
            if problems:
                return EXIT_CONFIG
            print(f'{args.verify}: ok')
            return EXIT_OK

        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_CONFIG

        overrides = {
            name: value for name, value in vars(args).items()
            if name not in ('verbose', 'quiet', 'verify', 'output_dir',
                            'command', 'config')
        }
        config = CONFIGS[args.command].from_sources(
            _load_config_file(args.config), overrides
        )
        return RUNNERS[args.command](config, output_dir(args.output_dir))
    except ConfigError as exc:
        print(f'gaugecool: invalid configuration: {exc}', file=sys.stderr)
        return EXIT_CONFIG
    except (GaugeCoolError, OSError, ValueError) as exc:
        print(f'gaugecool: {exc}', file=sys.stderr)
        return EXIT_CONFIG
