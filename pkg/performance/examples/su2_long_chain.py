"""
SU(2) chain of 64 links with complex couplings.

Scenario:
  Long chains are where gradient descent falls behind the optimal gauge,
  both in cost per step and in how well it cools.

"""
from time import perf_counter_ns

from gaugecool import ChainParams, Schedule, run_chain

SEED = 7
PARAMS = ChainParams(2, 64, 1 + 0.5j, 1 + 0.5j)
SCHEDULE = Schedule(1e-4, 0.05, 1e-2, 10, seed=SEED)


def run(strategy):
    start = perf_counter_ns()
    report = run_chain(PARAMS, SCHEDULE, strategy, [1])
    run_time = perf_counter_ns() - start
    log = {k: e.mean for k, e in report.estimates.items()}
    log['max_delta_f'] = max(d for _, d in report.delta_f_series)
    log['diverged'] = report.diverged
    return run_time, log
