"""
SU(3) chain of 16 links with a chemical potential.

Scenario:
  A short burn-in followed by 20 samples of the loop observables
  ``k = 1, -1``. Most of the time goes into the matrix exponentials of the
  Euler step and into whatever the cooling strategy costs per step.

"""
from time import perf_counter_ns

from gaugecool import ChainParams, Schedule, run_chain

SEED = 42
PARAMS = ChainParams.from_chemical_potential(3, 16, 2, 0.1, 1)
SCHEDULE = Schedule(2e-5, 0.02, 2e-3, 20, seed=SEED)


def run(strategy):
    start = perf_counter_ns()
    report = run_chain(PARAMS, SCHEDULE, strategy, [1, -1])
    run_time = perf_counter_ns() - start
    log = {k: e.mean for k, e in report.estimates.items()}
    log['diverged'] = report.diverged
    return run_time, log
