"""
Tests for the ``gaugecool`` command line.

"""
import csv
import json

import pytest

from gaugecool import cli
from gaugecool.cli import (
    EXIT_CONFIG,
    EXIT_EXCURSION,
    EXIT_OK,
    main,
    run_bench,
    verify_report,
)
from gaugecool.config import OUTPUT_DIR_ENV, BenchConfig
from gaugecool.cooling import NoCooling
from gaugecool.langevin import run_chain

SMALL_CHAIN = [
    'chain', '--n', '2', '--N', '2', '--dt', '1e-3', '--burn-in-time', '0.01',
    '--sample-interval', '0.005', '--num-samples', '10', '--seed', '3',
]


def read_csv(path):
    with open(path) as f:
        return list(csv.reader(f))


def test_exact_su3(capsys):
    status = main(['exact', '--group', 'su3', '--k', '1', '--beta', '2',
                   '--kappa', '0.1', '--mu', '1'])
    assert status == EXIT_OK
    assert capsys.readouterr().out == '2.0957\n'


def test_exact_su2_complex(capsys):
    status = main(['exact', '--group', 'su2', '--k', '1', '--beta', '1+0.2i'])
    assert status == EXIT_OK
    assert capsys.readouterr().out == '0.8759+0.1300i\n'


def test_region_query(capsys):
    assert main(['region', '--a', '0', '--b', '0.49']) == EXIT_OK
    assert 'localized: true' in capsys.readouterr().out
    assert main(['region', '--a', '0', '--b', '0.51']) == EXIT_OK
    assert 'localized: false' in capsys.readouterr().out


def test_region_boundary(tmp_path):
    status = main(['--output-dir', str(tmp_path), 'region', '--a-min', '0',
                   '--a-max', '1', '--a-count', '3'])
    assert status == EXIT_OK
    rows = read_csv(tmp_path / 'region-boundary.csv')
    assert rows[0] == ['a', 'b']
    assert len(rows) == 4
    assert float(rows[1][1]) == pytest.approx(0.5, abs=1e-3)


def test_flow(tmp_path):
    status = main(['--output-dir', str(tmp_path), 'flow', '--a', '1',
                   '--b', '0.2', '--x-count', '5', '--y-count', '3',
                   '--bounds=-2,2,-1,1'])
    assert status == EXIT_OK
    rows = read_csv(tmp_path / 'flow-flow.csv')
    assert rows[0] == ['x', 'y', 'kr', 'ki', 'norm']
    assert len(rows) == 15


def test_chain_writes_report(tmp_path, capsys):
    status = main(['--output-dir', str(tmp_path)] + SMALL_CHAIN
                  + ['--ks', '1,-1', '--samples'])
    assert status == EXIT_OK
    assert 'O_1 = ' in capsys.readouterr().out

    with open(tmp_path / 'chain.json') as f:
        report = json.load(f)
    assert report['meta']['command'] == 'chain'
    assert report['meta']['config']['num_samples'] == 10
    series = read_csv(tmp_path / 'chain-series.csv')
    assert series[0] == ['t', 'delta_f']
    samples = read_csv(tmp_path / 'chain-samples.csv')
    assert len(samples) == 1 + 2 * 10

    assert verify_report(str(tmp_path / 'chain.json')) == []
    assert main(['--verify', str(tmp_path / 'chain.json')]) == EXIT_OK
    assert capsys.readouterr().out.endswith(': ok\n')


def test_verify_tampered(tmp_path, capsys):
    main(['--output-dir', str(tmp_path)] + SMALL_CHAIN)
    path = tmp_path / 'chain.json'
    with open(path) as f:
        report = json.load(f)
    report['meta']['config']['num_samples'] = 11
    report['meta']['config']['seed'] = 4
    with open(path, 'w') as f:
        json.dump(report, f)

    problems = verify_report(str(path))
    assert 'seed differs from the configuration.' in problems
    assert '10 samples recorded, 11 expected.' in problems
    assert main(['--verify', str(path)]) == EXIT_CONFIG
    assert 'seed differs' in capsys.readouterr().err


def test_verify_unknown_command(tmp_path):
    path = tmp_path / 'other.json'
    path.write_text(json.dumps({'meta': {'command': 'exact'}}))
    assert verify_report(str(path)) == ["unknown report command 'exact'."]


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    assert main(SMALL_CHAIN + ['--name', 'env']) == EXIT_OK
    assert (tmp_path / 'env.json').exists()


def test_config_file_and_flags(tmp_path):
    config = tmp_path / 'settings.json'
    config.write_text(json.dumps({
        'n': 2, 'N': 2, 'dt': 1e-3, 'burn_in_time': 0.01,
        'sample_interval': 0.005, 'num_samples': 4,
    }))
    status = main(['--output-dir', str(tmp_path), 'chain', '--config',
                   str(config), '--num-samples', '6'])
    assert status == EXIT_OK
    with open(tmp_path / 'chain.json') as f:
        report = json.load(f)
    assert report['num_samples'] == 6


def test_reduced(tmp_path):
    status = main(['--output-dir', str(tmp_path), 'reduced', '--a', '1',
                   '--b', '0.2', '--dt', '1e-4', '--burn-in-time', '0.01',
                   '--sample-interval', '0.005', '--num-samples', '10',
                   '--samples'])
    assert status == EXIT_OK
    assert verify_report(str(tmp_path / 'reduced.json')) == []
    assert len(read_csv(tmp_path / 'reduced-samples.csv')) == 11


def test_reduced_escape(tmp_path, capsys):
    status = main(['--output-dir', str(tmp_path), 'reduced', '--a', '-20',
                   '--b', '0', '--y0', '0.99', '--y-bound', '1',
                   '--dt', '1e-3', '--burn-in-time', '0.1',
                   '--sample-interval', '0.01', '--num-samples', '5'])
    assert status == EXIT_EXCURSION
    assert 'escaped at t=' in capsys.readouterr().out
    assert verify_report(str(tmp_path / 'reduced.json')) == []


def test_cool_bench(tmp_path):
    status = main(['--output-dir', str(tmp_path), 'cool-bench', '--n', '2',
                   '--N', '2', '--dt', '1e-3', '--total-time', '0.02',
                   '--alphas', '1.0', '--delta-f-stride', '5'])
    assert status == EXIT_OK
    for label in ('none', 'gradient-1', 'optimal'):
        assert (tmp_path / f'cool-bench-{label}-series.csv').exists()
    with open(tmp_path / 'cool-bench.json') as f:
        summary = json.load(f)
    runs = summary['runs']
    assert sorted(runs) == ['gradient-1', 'none', 'optimal']
    assert not any(run['diverged'] for run in runs.values())


def test_bench_workers_match_sequential():
    values = {'n': 2, 'N': 2, 'dt': 1e-3, 'total_time': 0.01,
              'alphas': [1.0], 'seed': 5}
    sequential = run_bench(BenchConfig.from_sources(values))
    parallel = run_bench(BenchConfig.from_sources(dict(values, workers=2)))
    assert sequential.keys() == parallel.keys()
    for label, report in sequential.items():
        assert report.delta_f_series == parallel[label].delta_f_series


def test_invalid_configuration(capsys):
    assert main(['chain', '--n', '7']) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert err.startswith('gaugecool: invalid configuration: n:')


def test_unreadable_config_file(tmp_path, capsys):
    missing = tmp_path / 'missing.json'
    assert main(['chain', '--config', str(missing)]) == EXIT_CONFIG
    assert 'config: cannot read' in capsys.readouterr().err


def test_config_file_not_an_object(tmp_path):
    path = tmp_path / 'list.json'
    path.write_text('[1, 2]')
    assert main(['exact', '--config', str(path)]) == EXIT_CONFIG


def test_unknown_flag():
    with pytest.raises(SystemExit) as excinfo:
        main(['chain', '--steps', '10'])
    assert excinfo.value.code == EXIT_CONFIG


def test_no_command(capsys):
    assert main([]) == EXIT_CONFIG
    assert 'usage:' in capsys.readouterr().err


def test_exact_su2_from_coupling_pair(capsys):
    """For SU(2) only the sum ``beta1 + beta2`` matters."""
    status = main(['exact', '--group', 'su2', '--k', '1', '--beta1', '0.5',
                   '--beta2', '0.5+0.2i'])
    assert status == EXIT_OK
    assert capsys.readouterr().out == '0.8759+0.1300i\n'


def test_verify_cool_bench(tmp_path, capsys):
    main(['--output-dir', str(tmp_path), 'cool-bench', '--n', '2', '--N',
          '2', '--dt', '1e-3', '--total-time', '0.01', '--alphas', '1.0'])
    path = tmp_path / 'cool-bench.json'
    with open(path) as f:
        summary = json.load(f)
    assert summary['meta']['command'] == 'cool-bench'
    assert summary['meta']['schedule']['seed'] == 0

    assert verify_report(str(path)) == []
    capsys.readouterr()
    assert main(['--verify', str(path)]) == EXIT_OK
    assert capsys.readouterr().out.endswith(': ok\n')

    del summary['runs']['optimal']
    with open(path, 'w') as f:
        json.dump(summary, f)
    problems = verify_report(str(path))
    assert len(problems) == 1 and 'differ from the strategies' in problems[0]
    assert main(['--verify', str(path)]) == EXIT_CONFIG


def test_verify_cool_bench_early_stop(tmp_path):
    main(['--output-dir', str(tmp_path), 'cool-bench', '--n', '2', '--N',
          '2', '--dt', '1e-3', '--total-time', '0.01', '--alphas', '1.0'])
    path = tmp_path / 'cool-bench.json'
    with open(path) as f:
        summary = json.load(f)
    summary['runs']['none']['end_time'] = 0.005
    with open(path, 'w') as f:
        json.dump(summary, f)
    assert verify_report(str(path)) == [
        'none stopped early without diverging.'
    ]


def test_cool_bench_divergence_exit_status(tmp_path, monkeypatch):
    """A diverged strategy makes ``cool-bench`` exit with status 1, and its
    shortened run still verifies."""
    def strict_run_chain(params, schedule, strategy, ks, **kwargs):
        if isinstance(strategy, NoCooling):
            # delta_f >= 0, so the first step already diverges.
            kwargs['divergence_threshold'] = -1.0
        return run_chain(params, schedule, strategy, ks, **kwargs)

    monkeypatch.setattr(cli, 'run_chain', strict_run_chain)
    status = main(['--output-dir', str(tmp_path), 'cool-bench', '--n', '2',
                   '--N', '2', '--dt', '1e-3', '--total-time', '0.01',
                   '--alphas', '1.0'])
    assert status == EXIT_EXCURSION
    with open(tmp_path / 'cool-bench.json') as f:
        runs = json.load(f)['runs']
    assert runs['none']['diverged']
    assert not runs['optimal']['diverged']
    assert verify_report(str(tmp_path / 'cool-bench.json')) == []
