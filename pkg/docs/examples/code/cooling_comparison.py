"""
Three SU(3) chains of 32 links driven by the same noise, one per cooling
strategy. Prints how far each one strays from SU(3).

"""
import math

from gaugecool import ChainParams, GradientDescent, NoCooling, Optimal
from gaugecool import Schedule, run_chain

params = ChainParams.from_chemical_potential(3, 32, 2, 0.1, 1)
schedule = Schedule(2e-5, 0.0, 0.5, 1, seed=1)

for strategy in (NoCooling(), GradientDescent(1.0, 5), Optimal()):
    report = run_chain(params, schedule, strategy, [1])
    worst = max(
        math.inf if math.isnan(d) else d for _, d in report.delta_f_series
    )
    status = f'diverged at t={report.end_time:g}' if report.diverged else 'ok'
    print(f'{strategy!r:<24} max delta_F {worst:9.3e}  {status}')
