"""
Times and profiles the scenarios in ``examples/`` under every cooling
strategy. Each scenario is run twice to check that its output only depends
on the seed. Profiles are written to ``profiling/`` as ``.pstat`` files and,
with graphviz installed, rendered by gprof2dot.

"""
import cProfile
import datetime
import importlib.util
import os
import pstats
import subprocess
import warnings

from gaugecool import GradientDescent, NoCooling, Optimal

STRATEGIES = {
    'none': NoCooling(),
    'gradient': GradientDescent(1.0, 5),
    'optimal': Optimal(),
}
REPEATS = 2


def load(performance_dir, test):
    spec = importlib.util.spec_from_file_location(
        f'{test.split(".")[0]}.run', os.path.join(performance_dir, test)
    )
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def run_and_time(performance_dir, tests):
    logs = {}

    for label, strategy in STRATEGIES.items():
        logs[label] = {}
        profiler = cProfile.Profile()
        profiler.enable()

        for test in tests:
            module = load(performance_dir, test)
            runs = [module.run(strategy) for _ in range(REPEATS)]
            avg_run_time = sum(t for t, _ in runs) / REPEATS
            logs[label][test] = [log for _, log in runs]
            print(f'{label} - {test} - avg run: {avg_run_time / 1e6:.0f}ms')

        profiler.disable()

        os.makedirs('profiling', exist_ok=True)
        stamp = datetime.datetime.now().timestamp()
        filename = f'profiling/{label}_prof_{stamp}'
        pstats.Stats(profiler).sort_stats('cumtime').dump_stats(
            f'{filename}.pstat'
        )
        subprocess.run(
            f'gprof2dot -f pstats {filename}.pstat -n 1.0 -e 0.5 '
            f'--color-nodes-by-selftime | dot -Tpng -o {filename}.png',
            shell=True, check=False,
        )
        print('--')

    return logs


def validate(logs, tests):
    for label, by_test in logs.items():
        for test in tests:
            first, *others = by_test[test]
            if all(log == first for log in others):
                print(f'{label} - {test} OK!')
            else:
                warnings.warn(
                    f'Runs of {test} with {label} cooling differ: '
                    f'{by_test[test]}'
                )


if __name__ == '__main__':
    performance_dir = os.path.join(
        os.path.dirname(os.path.realpath(__file__)), 'examples'
    )
    tests = sorted(f for f in os.listdir(performance_dir) if f.endswith('.py'))

    logs = run_and_time(performance_dir, tests)
    print('validate')
    validate(logs, tests)
