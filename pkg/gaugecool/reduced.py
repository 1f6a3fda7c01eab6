"""
The gauge-cooled one-link SU(2) dynamics.

.. autosummary::

    ReducedParams
    ReducedState
    drift_reduced
    singular_drift
    ReducedChain
    run_reduced
    localization_f
    is_localized
    region_boundary
    FlowField
    flow_field

With optimal cooling an SU(2) chain collapses to one complex angle
``s = x + i y`` on the cylinder (the loop eigenvalues are ``e^(-is)`` and
``e^(is)``) obeying ::

    ds = 2 (-beta sin s + cot s) dt + dw,    beta = beta1 + beta2 = A + i B

with real noise ``dw`` of variance ``2 dt``. Only ``x`` receives noise.

Whether ``y`` stays in a bounded band is decided by the sign of
:func:`localization_f`: for ``f(A, B) < 0`` there are constants
``0 < C1 < C2`` with ``K_I < 0`` on ``C1 < y < C2`` for all ``x`` (and the
mirror image for negative ``y``), so samples started at ``y = 0`` never
leave ``|y| < C2``.

"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Generator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from gaugecool import _speedups
from gaugecool.core import Environment
from gaugecool.events import Event
from gaugecool.exceptions import Escape, InvalidInput, SingularDrift
from gaugecool.langevin import (
    ChainReport,
    RunningMean,
    Schedule,
    make_rng,
)

logger = logging.getLogger(__name__)

Y_BOUND = 30.0
"""Default ``|y|`` above which a reduced run counts as escaped."""

CAP_FACTOR = 10.0
"""Default drift displacement cap in units of the noise scale
``sqrt(2 dt)``."""

CRITICAL_A = 1.5 * math.sqrt(3.0)
"""``3 sqrt(3) / 2``: for ``|A|`` at or above it nothing is localized."""

CHUNK = 1 << 16
"""Noise variates drawn per call into the integration loop."""


@dataclass(frozen=True)
class ReducedParams:
    """``beta = A + i B``, the sum of the two couplings."""

    A: float
    B: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.A) and math.isfinite(self.B)):
            raise InvalidInput(
                f'A(={self.A}) and B(={self.B}) must be finite.'
            )
        object.__setattr__(self, 'A', float(self.A))
        object.__setattr__(self, 'B', float(self.B))

    @classmethod
    def from_couplings(cls, beta1: complex, beta2: complex) -> 'ReducedParams':
        beta = complex(beta1) + complex(beta2)
        return cls(beta.real, beta.imag)

    @property
    def beta(self) -> complex:
        return complex(self.A, self.B)


@dataclass(frozen=True)
class ReducedState:
    """A point ``s = x + i y`` of the cylinder; *x* is wrapped into
    ``(-pi, pi]``."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidInput(
                f'x(={self.x}) and y(={self.y}) must be finite.'
            )
        x = math.remainder(float(self.x), 2 * math.pi)
        if x == -math.pi:
            x = math.pi
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'y', float(self.y))

    @property
    def s(self) -> complex:
        return complex(self.x, self.y)


def drift_reduced(
    x: float, y: float, A: float, B: float
) -> Tuple[float, float]:
    """Return the drift ``(K_R, K_I)`` of the reduced SDE::

        K_R =  2 (-A cosh y sin x + B sinh y cos x
                  + sin 2x / (cosh 2y - cos 2x))
        K_I = -2 (A sinh y cos x + B cosh y sin x
                  + sinh 2y / (cosh 2y - cos 2x))

    Raise :exc:`~gaugecool.exceptions.SingularDrift` within
    :data:`~gaugecool._speedups.SINGULAR_RADIUS` of ``y = 0`` and ``x`` a
    multiple of ``pi``.

    """
    try:
        return _speedups.drift(x, y, A, B)
    except ZeroDivisionError:
        raise SingularDrift(f'drift is singular at s=({x}+{y}j).') from None


def singular_drift(x: float, y: float) -> Tuple[float, float]:
    """Return ``(2x, -2y) / (x**2 + y**2)``, the leading behaviour
    ``2 / s`` of the drift near ``s = 0``. Only meant for comparison with
    :func:`drift_reduced`."""
    r2 = x * x + y * y
    if r2 == 0:
        raise SingularDrift('drift is singular at s=0.')
    return 2 * x / r2, -2 * y / r2


class ReducedChain:
    """State of one reduced run, advanced by an
    :class:`~gaugecool.core.Environment`.

    Records the largest ``|y|`` seen and how many steps had their drift
    displacement capped. Raise :exc:`~gaugecool.exceptions.Escape` from
    :meth:`advance` once ``|y| > y_bound``.

    """

    def __init__(
        self,
        params: ReducedParams,
        dt: float,
        rng: np.random.Generator,
        initial: ReducedState = ReducedState(0.5, 0.0),
        y_bound: float = Y_BOUND,
        cap_factor: float = CAP_FACTOR,
    ):
        if not y_bound > 0:
            raise InvalidInput(f'y_bound(={y_bound}) must be > 0.')
        if not cap_factor > 0:
            raise InvalidInput(f'cap_factor(={cap_factor}) must be > 0.')
        if abs(initial.y) > y_bound:
            raise InvalidInput(
                f'initial y(={initial.y}) is outside y_bound(={y_bound}).'
            )
        self.params = params
        self.dt = dt
        self.y_bound = y_bound
        self.cap = cap_factor * math.sqrt(2 * dt)
        self.x = initial.x
        self.y = initial.y
        self.steps = 0
        self.capped = 0
        self.max_abs_y = abs(initial.y)
        self._rng = rng

    def __repr__(self) -> str:
        return (
            f'<ReducedChain A={self.params.A} B={self.params.B} '
            f'steps={self.steps}>'
        )

    @property
    def time(self) -> float:
        return self.steps * self.dt

    @property
    def state(self) -> ReducedState:
        return ReducedState(self.x, self.y)

    def advance(self, ticks: int) -> None:
        while ticks > 0:
            chunk = min(ticks, CHUNK)
            noise = self._rng.standard_normal(chunk).tolist()
            x, y, steps, capped, max_abs_y, escaped = _speedups.integrate(
                self.x, self.y, self.params.A, self.params.B, self.dt,
                noise, self.cap, self.y_bound,
            )
            self.x, self.y = x, y
            self.steps += steps
            self.capped += capped
            self.max_abs_y = max(self.max_abs_y, max_abs_y)
            if escaped:
                raise Escape(self.time, y)
            ticks -= chunk


def _sampler(
    env: Environment,
    chain: ReducedChain,
    schedule: Schedule,
    ks: Sequence[int],
    means: Dict[int, RunningMean],
    samples: Optional[List[complex]],
) -> Generator[Event, Any, None]:
    yield env.timeout(schedule.burn_in_time)
    for _ in range(schedule.num_samples):
        yield env.timeout(schedule.sample_interval)
        s = complex(chain.x, chain.y)
        for k in ks:
            means[k].push(2 * complex(np.cos(k * s)))
        if samples is not None:
            samples.append(s)


def run_reduced(
    params: ReducedParams,
    schedule: Schedule,
    observable_ks: Sequence[int] = (1, 2, 3),
    *,
    initial: ReducedState = ReducedState(0.5, 0.0),
    y_bound: float = Y_BOUND,
    cap_factor: float = CAP_FACTOR,
    record_samples: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> ChainReport:
    """Integrate the reduced SDE and estimate
    ``<O_k> = <e^(iks) + e^(-iks)>`` for every *k* in *observable_ks*.

    A run in which ``|y|`` exceeds *y_bound* is stopped and returned with
    :attr:`~gaugecool.langevin.ChainReport.escaped` set. The report carries
    the largest ``|y|`` of the run and the number of capped steps.

    """
    ks = list(observable_ks)
    if 0 in ks:
        raise InvalidInput('k(=0) must be nonzero.')
    if rng is None:
        rng = make_rng(schedule.seed)

    chain = ReducedChain(
        params, schedule.dt, rng, initial, y_bound, cap_factor
    )
    env = Environment(chain, schedule.dt)
    means = {k: RunningMean() for k in ks}
    samples: Optional[List[complex]] = [] if record_samples else None
    sampler = env.process(_sampler(env, chain, schedule, ks, means, samples))

    logger.info(
        'reduced run A=%g B=%g dt=%g total time %g',
        params.A, params.B, schedule.dt, schedule.total_time,
    )
    escaped = False
    try:
        env.run(until=sampler)
    except Escape as exc:
        escaped = True
        logger.info('reduced run escaped: %s', exc)

    if chain.capped:
        logger.debug('%d of %d steps capped', chain.capped, chain.steps)
    return ChainReport(
        estimates={k: means[k].estimate() for k in ks},
        delta_f_series=[],
        meta={
            'model': 'reduced',
            'params': {'A': params.A, 'B': params.B},
            'schedule': schedule.to_dict(),
            'initial': [initial.x, initial.y],
            'y_bound': y_bound,
            'cap_factor': cap_factor,
            'observables': ks,
        },
        num_samples=means[ks[0]].count if ks else 0,
        end_time=chain.time,
        samples=samples,
        escaped=escaped,
        capped_steps=chain.capped,
        max_abs_y=chain.max_abs_y,
    )


def _max_over_xi(a: float, b: float, eta: np.ndarray) -> np.ndarray:
    """Maximum over ``xi`` in ``[-1, 1]`` of the cubic
    ``c xi^3 - p c xi^2 - xi + p - sqrt(c) / a`` with ``c = 1 - eta^2`` and
    ``p = b / (a eta)``, for every entry of *eta*."""
    c = 1 - eta ** 2
    p = b / (a * eta)
    # Stationary points of the cubic; always real since c > 0.
    root = np.sqrt((p * c) ** 2 + 3 * c)
    critical = np.clip(
        np.stack([(p * c - root) / (3 * c), (p * c + root) / (3 * c)]), -1, 1
    )
    xi = np.concatenate(
        [np.broadcast_to([[-1.0], [1.0]], (2, eta.size)), critical]
    )
    values = c * xi ** 3 - p * c * xi ** 2 - xi + p - np.sqrt(c) / a
    return values.max(axis=0)


def localization_f(A: float, B: float, eta_samples: int = 1000) -> float:
    """Return ``f(A, B)``, the infimum over ``eta`` in ``(0, 1)`` of the
    maximum over ``xi`` in ``[-1, 1]`` of ::

        xi^3 (1 - eta^2) - xi - B / (A eta) xi^2 (1 - eta^2)
            + B / (A eta) - sqrt(1 - eta^2) / A

    ``f(A, B) < 0`` means ``y`` stays confined. The inner maximum is exact
    (endpoints and stationary points of the cubic); the infimum is taken on
    the grid ``eta_i = (i + 1/2) / eta_samples`` and refined by a bounded
    scalar minimization around the best grid point.

    Localization does not change under ``A -> -A`` or ``B -> -B``, so the
    absolute values are used. For ``A = 0`` the closed form criterion
    ``|B| < 1/2`` is returned as ``|B| - 1/2``.

    Raise :exc:`~gaugecool.exceptions.InvalidInput` for non-finite input or
    fewer than 1000 grid points.

    """
    if not (math.isfinite(A) and math.isfinite(B)):
        raise InvalidInput(f'A(={A}) and B(={B}) must be finite.')
    if eta_samples < 1000:
        raise InvalidInput(f'eta_samples(={eta_samples}) must be >= 1000.')
    a, b = abs(A), abs(B)
    if a == 0:
        return b - 0.5

    eta = (np.arange(eta_samples) + 0.5) / eta_samples
    values = _max_over_xi(a, b, eta)
    best = int(np.argmin(values))
    lo = eta[best - 1] if best > 0 else eta[0] / 2
    hi = eta[best + 1] if best + 1 < eta_samples else (1 + eta[-1]) / 2
    refined = minimize_scalar(
        lambda e: float(_max_over_xi(a, b, np.array([e]))[0]),
        bounds=(lo, hi),
        method='bounded',
        options={'xatol': 1e-10},
    )
    return float(min(values[best], refined.fun))


def is_localized(A: float, B: float, eta_samples: int = 1000) -> bool:
    """``True`` if ``(A, B)`` lies in the localized region."""
    return localization_f(A, B, eta_samples) < 0


def region_boundary(
    a_values: Sequence[float], tol: float = 1e-4, eta_samples: int = 1000
) -> np.ndarray:
    """Trace the localized region: for every ``A`` return the ``B >= 0``
    at which :func:`localization_f` changes sign, to within *tol*.

    ``f`` increases with ``|B|``, so the boundary is found by bisection.
    The region is symmetric under ``B -> -B``; it is empty (boundary ``0``)
    for ``|A| >= 3 sqrt(3) / 2``.

    """
    if not tol > 0:
        raise InvalidInput(f'tol(={tol}) must be > 0.')
    boundary = np.empty(len(a_values))
    for i, A in enumerate(a_values):
        a = abs(float(A))
        if a >= CRITICAL_A or localization_f(a, 0.0, eta_samples) >= 0:
            boundary[i] = 0.0
            continue
        lo, hi = 0.0, 1.0
        while localization_f(a, hi, eta_samples) < 0:
            lo, hi = hi, 2 * hi
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if localization_f(a, mid, eta_samples) < 0:
                lo = mid
            else:
                hi = mid
        boundary[i] = (lo + hi) / 2
        logger.debug('boundary at A=%g: B=%.5f', A, boundary[i])
    return boundary


@dataclass(frozen=True)
class FlowField:
    """The drift on a grid. :attr:`kr`, :attr:`ki` and :attr:`singular`
    have shape ``(len(y), len(x))``; singular cells carry ``nan``."""

    x: np.ndarray
    y: np.ndarray
    kr: np.ndarray
    ki: np.ndarray
    singular: np.ndarray

    @property
    def norm(self) -> np.ndarray:
        return np.hypot(self.kr, self.ki)

    def direction(self) -> Tuple[np.ndarray, np.ndarray]:
        """Unit vectors along the drift (zero where the drift vanishes)."""
        norm = self.norm
        safe = np.where(norm > 0, norm, 1.0)
        return self.kr / safe, self.ki / safe

    def rows(self) -> np.ndarray:
        """Regular cells as rows ``(x, y, kr, ki, norm)``, x running
        fastest."""
        xx, yy = np.meshgrid(self.x, self.y)
        regular = ~self.singular
        return np.column_stack([
            xx[regular], yy[regular], self.kr[regular], self.ki[regular],
            self.norm[regular],
        ])


def flow_field(
    A: float,
    B: float,
    x_count: int = 41,
    y_count: int = 41,
    bounds: Tuple[float, float, float, float] = (-math.pi, math.pi, -3.0, 3.0),
) -> FlowField:
    """Evaluate :func:`drift_reduced` on a regular ``x_count`` by
    ``y_count`` grid spanning ``bounds = (x_min, x_max, y_min, y_max)``.
    Cells within :data:`~gaugecool._speedups.SINGULAR_RADIUS` of a singular
    point are marked rather than evaluated."""
    if x_count < 2 or y_count < 2:
        raise InvalidInput(
            f'grid(={x_count}x{y_count}) needs at least 2 points per axis.'
        )
    x_min, x_max, y_min, y_max = bounds
    if not (x_min < x_max and y_min < y_max):
        raise InvalidInput(f'bounds(={bounds}) must be increasing.')
    x = np.linspace(x_min, x_max, x_count)
    y = np.linspace(y_min, y_max, y_count)
    xx, yy = np.meshgrid(x, y)

    sin_x, cos_x = np.sin(xx), np.cos(xx)
    sinh_y, cosh_y = np.sinh(yy), np.cosh(yy)
    q = sinh_y ** 2 + sin_x ** 2
    singular = q < _speedups.SINGULAR_Q
    with np.errstate(divide='ignore', invalid='ignore'):
        q = np.where(singular, np.nan, q)
        kr = 2 * (-A * cosh_y * sin_x + B * sinh_y * cos_x + sin_x * cos_x / q)
        ki = -2 * (
            A * sinh_y * cos_x + B * cosh_y * sin_x + sinh_y * cosh_y / q
        )
    return FlowField(x, y, kr, ki, singular)
