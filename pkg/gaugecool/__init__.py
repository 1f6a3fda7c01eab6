"""
The most used parts of gaugecool in one namespace. Everything (and more)
is also available from the submodules.

The components available here, by topic:

{toc}

"""
from typing import Any, Tuple

from pkg_resources import DistributionNotFound, get_distribution

from gaugecool.algebra import eig, expm, generator_basis, unitarity_distance
from gaugecool.cooling import (
    GradientDescent,
    NoCooling,
    Optimal,
    cool_gradient,
    cool_optimal,
)
from gaugecool.core import Environment
from gaugecool.events import Event, Process, Timeout
from gaugecool.exact import QuadratureSpec, su2_expectation, su3_expectation
from gaugecool.exceptions import (
    ConfigError,
    Divergence,
    Escape,
    GaugeCoolError,
    InvalidDimension,
    InvalidInput,
    SingularDrift,
)
from gaugecool.langevin import ChainReport, Schedule, euler_step, run_chain
from gaugecool.model import (
    ChainParams,
    LinkConfig,
    action,
    drift,
    gauge_transform,
    loop_observable,
)
from gaugecool.reduced import (
    ReducedParams,
    ReducedState,
    drift_reduced,
    flow_field,
    localization_f,
    run_reduced,
)

__all__ = [
    'ChainParams',
    'ChainReport',
    'ConfigError',
    'Divergence',
    'Environment',
    'Escape',
    'Event',
    'GaugeCoolError',
    'GradientDescent',
    'InvalidDimension',
    'InvalidInput',
    'LinkConfig',
    'NoCooling',
    'Optimal',
    'Process',
    'QuadratureSpec',
    'ReducedParams',
    'ReducedState',
    'Schedule',
    'SingularDrift',
    'Timeout',
    'action',
    'cool_gradient',
    'cool_optimal',
    'drift',
    'drift_reduced',
    'eig',
    'euler_step',
    'expm',
    'flow_field',
    'gauge_transform',
    'generator_basis',
    'localization_f',
    'loop_observable',
    'run_chain',
    'run_reduced',
    'su2_expectation',
    'su3_expectation',
    'unitarity_distance',
]


def _compile_toc(
    entries: Tuple[Tuple[str, Tuple[Any, ...]], ...], underline: str = '='
) -> str:
    """Render *entries* of (section title, objects) as autosummary
    tables."""
    blocks = []
    for title, objs in entries:
        rows = ''.join(
            f'    ~{obj.__module__}.{obj.__name__}\n' for obj in objs
        )
        blocks.append(
            f'\n\n{title}\n{underline * len(title)}\n\n'
            f'.. autosummary::\n\n{rows}'
        )
    return ''.join(blocks)


_toc = (
    ('Lie algebra', (
        generator_basis, expm, eig, unitarity_distance,
    )),
    ('Polyakov chain', (
        ChainParams, LinkConfig, action, drift, loop_observable,
        gauge_transform,
    )),
    ('Gauge cooling', (
        NoCooling, GradientDescent, Optimal, cool_optimal, cool_gradient,
    )),
    ('Langevin', (
        Schedule, ChainReport, euler_step, run_chain,
    )),
    ('Reduced SU(2) dynamics', (
        ReducedParams, ReducedState, drift_reduced, run_reduced,
        localization_f, flow_field,
    )),
    ('Exact values', (
        QuadratureSpec, su2_expectation, su3_expectation,
    )),
    ('Scheduling', (
        Environment, Event, Timeout, Process,
    )),
    ('Exceptions', (
        GaugeCoolError, InvalidDimension, InvalidInput, SingularDrift,
        Divergence, Escape, ConfigError,
    )),
)

# The docstring is generated from _toc, and __all__ must match it.
if __doc__:
    __doc__ = __doc__.format(toc=_compile_toc(_toc))
    assert set(__all__) == {obj.__name__ for _, objs in _toc for obj in objs}

try:
    __version__: str = get_distribution('gaugecool').version
except DistributionNotFound:  # pragma: no cover
    __version__ = '0.0.0'
