"""
Complex Langevin for the Polyakov chain.

.. autosummary::

    Schedule
    Estimate
    RunningMean
    ChainReport
    PolyakovChain
    euler_step
    run_chain
    make_rng

One run is a burn-in of length ``T`` followed by ``num_samples`` sampling
points spaced ``sample_interval`` apart, so samples are taken at
``T + m * sample_interval`` for ``m = 1, 2, ...``. Every Euler step is
followed by the chosen cooling strategy.

Noise comes from :class:`numpy.random.Generator` on the counter-based
:class:`numpy.random.Philox` bit generator seeded through
:class:`numpy.random.SeedSequence`. Each step draws one C-ordered
``(n**2 - 1, N)`` table of standard normals, so entry ``(a, k)`` of step
``t`` is variate number ``t * (n**2 - 1) * N + a * N + k`` of the stream.
Independent chains use :meth:`numpy.random.SeedSequence.spawn`.

"""
import logging
import math
from dataclasses import dataclass
from typing import (
    Any,
    Dict,
    Generator,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from gaugecool.algebra import expm, unitarity_distance
from gaugecool.cooling import CoolingStrategy
from gaugecool.core import Environment
from gaugecool.events import Event
from gaugecool.exceptions import (
    Divergence,
    InvalidDimension,
    InvalidInput,
)
from gaugecool.model import (
    ChainParams,
    LinkConfig,
    drift,
    eigen_phases,
)

logger = logging.getLogger(__name__)

DIVERGENCE_THRESHOLD = 1e6
"""``delta_f`` above which a chain counts as diverged."""

DELTA_F_STRIDE = 100
"""Default number of steps between two logged ``delta_f`` values."""


def make_rng(seed: int) -> np.random.Generator:
    """Return the generator used for the noise of a run seeded with
    *seed*."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


@dataclass(frozen=True)
class Schedule:
    """Time step, burn-in time, spacing and number of samples and the seed
    of a run.

    Raise :exc:`~gaugecool.exceptions.InvalidInput` unless ``dt > 0``,
    ``sample_interval >= dt``, ``burn_in_time >= 0`` and
    ``num_samples >= 1``, and unless both times are whole multiples of
    *dt*.

    """

    dt: float
    burn_in_time: float
    sample_interval: float
    num_samples: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise InvalidInput(f'dt(={self.dt}) must be > 0.')
        if not self.burn_in_time >= 0:
            raise InvalidInput(
                f'burn_in_time(={self.burn_in_time}) must be >= 0.'
            )
        if not self.sample_interval >= self.dt * (1 - 1e-9):
            raise InvalidInput(
                f'sample_interval(={self.sample_interval}) must be >= '
                f'dt(={self.dt}).'
            )
        if self.num_samples < 1:
            raise InvalidInput(
                f'num_samples(={self.num_samples}) must be >= 1.'
            )
        for name in ('burn_in_time', 'sample_interval'):
            steps = getattr(self, name) / self.dt
            if abs(steps - round(steps)) > 1e-6:
                raise InvalidInput(
                    f'{name}(={getattr(self, name)}) is not a multiple of '
                    f'dt(={self.dt}).'
                )

    @property
    def burn_in_steps(self) -> int:
        return round(self.burn_in_time / self.dt)

    @property
    def interval_steps(self) -> int:
        return round(self.sample_interval / self.dt)

    @property
    def total_time(self) -> float:
        return self.burn_in_time + self.num_samples * self.sample_interval

    @classmethod
    def from_steps(
        cls,
        dt: float,
        burn_in_steps: int,
        interval_steps: int,
        num_samples: int,
        seed: int = 0,
    ) -> 'Schedule':
        """Build a schedule with times given as numbers of steps."""
        return cls(
            dt, burn_in_steps * dt, interval_steps * dt, num_samples, seed
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dt': self.dt,
            'burn_in_time': self.burn_in_time,
            'sample_interval': self.sample_interval,
            'num_samples': self.num_samples,
            'seed': self.seed,
        }


@dataclass(frozen=True)
class Estimate:
    """Sample mean of a complex observable with its standard error, given
    separately for the real and imaginary part. The error assumes
    independent samples; it is ``nan`` with fewer than two samples."""

    mean: complex
    stderr: complex
    count: int

    def within(self, value: complex, tolerance: float) -> bool:
        """``True`` if both components lie within *tolerance* of *value*."""
        return (
            abs(self.mean.real - value.real) <= tolerance
            and abs(self.mean.imag - value.imag) <= tolerance
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mean': [self.mean.real, self.mean.imag],
            'stderr': [self.stderr.real, self.stderr.imag],
            'count': self.count,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Estimate':
        return cls(
            complex(*data['mean']), complex(*data['stderr']), data['count']
        )


class RunningMean:
    """Welford's streaming mean and variance, applied to the real and the
    imaginary part of a complex observable."""

    __slots__ = ('count', '_mean', '_m2')

    def __init__(self) -> None:
        self.count = 0
        self._mean = np.zeros(2)
        self._m2 = np.zeros(2)

    def push(self, value: complex) -> None:
        sample = np.array([value.real, value.imag])
        self.count += 1
        delta = sample - self._mean
        self._mean += delta / self.count
        self._m2 += delta * (sample - self._mean)

    def estimate(self) -> Estimate:
        mean = complex(*self._mean)
        if self.count < 2:
            return Estimate(mean, complex(math.nan, math.nan), self.count)
        stderr = np.sqrt(self._m2 / (self.count - 1) / self.count)
        return Estimate(mean, complex(*stderr), self.count)


@dataclass(frozen=True)
class ChainReport:
    """Outcome of a run.

    :attr:`samples` holds the logged complex angles when sample logging was
    requested: the ``n`` eigen-phases of every sample one after the other
    for full chains, one ``s = x + i y`` per sample for the reduced SDE.

    A run aborted by an excursion keeps the estimates accumulated so far and
    sets :attr:`diverged` or :attr:`escaped`; :attr:`end_time` is the time
    of the abort.

    """

    estimates: Dict[int, Estimate]
    delta_f_series: List[Tuple[float, float]]
    meta: Dict[str, Any]
    num_samples: int
    end_time: float
    samples: Optional[List[complex]] = None
    diverged: bool = False
    escaped: bool = False
    capped_steps: int = 0
    max_abs_y: Optional[float] = None

    @property
    def ok(self) -> bool:
        return not (self.diverged or self.escaped)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'estimates': {
                str(k): e.to_dict() for k, e in self.estimates.items()
            },
            'delta_f_series': [list(pair) for pair in self.delta_f_series],
            'meta': self.meta,
            'num_samples': self.num_samples,
            'end_time': self.end_time,
            'samples': (
                None if self.samples is None
                else [[s.real, s.imag] for s in self.samples]
            ),
            'diverged': self.diverged,
            'escaped': self.escaped,
            'capped_steps': self.capped_steps,
            'max_abs_y': self.max_abs_y,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ChainReport':
        samples = data.get('samples')
        return cls(
            estimates={
                int(k): Estimate.from_dict(e)
                for k, e in data['estimates'].items()
            },
            delta_f_series=[tuple(p) for p in data['delta_f_series']],
            meta=data['meta'],
            num_samples=data['num_samples'],
            end_time=data['end_time'],
            samples=(
                None if samples is None else [complex(*s) for s in samples]
            ),
            diverged=data.get('diverged', False),
            escaped=data.get('escaped', False),
            capped_steps=data.get('capped_steps', 0),
            max_abs_y=data.get('max_abs_y'),
        )


def euler_step(
    params: ChainParams, config: LinkConfig, dt: float, noise: np.ndarray
) -> LinkConfig:
    """One Euler-Maruyama step
    ``U_k <- exp(-i sum_a l_a (K_ak dt + eta_ak sqrt(2 dt))) U_k``.

    Raise :exc:`~gaugecool.exceptions.InvalidDimension` if *noise* is not a
    ``(n**2 - 1, N)`` table and :exc:`~gaugecool.exceptions.Divergence`
    (with an unknown time, ``nan``) if the exponent is not finite.

    """
    noise = np.asarray(noise, dtype=float)
    expected = (params.n ** 2 - 1, params.N)
    if noise.shape != expected:
        raise InvalidDimension(
            f'noise must have shape {expected}, got {noise.shape}.'
        )
    kick = drift(params, config).entries * dt + noise * math.sqrt(2 * dt)
    if not np.all(np.isfinite(kick)):
        raise Divergence(math.nan, 'non-finite drift')
    links = expm(-1j * params.basis.combine(kick)) @ config.links
    if not np.all(np.isfinite(links)):
        raise Divergence(math.nan, 'non-finite links')
    return LinkConfig(links, check=False)


class PolyakovChain:
    """The state of one Langevin chain, advanced step by step by an
    :class:`~gaugecool.core.Environment`.

    Every step draws a noise table, applies :func:`euler_step`, cools with
    *strategy*, repairs determinants that drifted by round-off and checks
    ``delta_f`` against *divergence_threshold*.

    """

    def __init__(
        self,
        params: ChainParams,
        strategy: CoolingStrategy,
        dt: float,
        rng: np.random.Generator,
        config: Optional[LinkConfig] = None,
        divergence_threshold: float = DIVERGENCE_THRESHOLD,
    ):
        if config is None:
            config = LinkConfig.identity(params.n, params.N)
        elif (config.n, config.N) != (params.n, params.N):
            raise InvalidDimension(
                f'config has (n, N)=({config.n}, {config.N}), params expect '
                f'({params.n}, {params.N}).'
            )
        self.params = params
        self.strategy = strategy
        self.dt = dt
        self.divergence_threshold = divergence_threshold
        self.config = config
        self.steps = 0
        self.delta_f = unitarity_distance(config)
        self.last_spectrum = None
        self._rng = rng
        self._shape = (params.n ** 2 - 1, params.N)

    def __repr__(self) -> str:
        return (
            f'<PolyakovChain n={self.params.n} N={self.params.N} '
            f'{self.strategy._desc()} steps={self.steps}>'
        )

    @property
    def time(self) -> float:
        return self.steps * self.dt

    def step(self, noise: Optional[np.ndarray] = None) -> None:
        if noise is None:
            noise = self._rng.standard_normal(self._shape)
        try:
            config = euler_step(self.params, self.config, self.dt, noise)
        except Divergence as exc:
            raise Divergence(self.time + self.dt, exc.cause) from exc
        outcome = self.strategy.cool(config, self.dt)
        self.steps += 1
        self.last_spectrum = outcome.spectrum
        config = outcome.cooled.renormalized()
        delta_f = (
            outcome.delta_f_after if config is outcome.cooled
            else unitarity_distance(config)
        )
        self.config = config
        self.delta_f = delta_f
        if not (
            math.isfinite(delta_f) and delta_f <= self.divergence_threshold
        ):
            raise Divergence(self.time, delta_f)

    def advance(self, ticks: int) -> None:
        for _ in range(ticks):
            self.step()


def _monitor(
    env: Environment,
    chain: PolyakovChain,
    stride: int,
    series: List[Tuple[float, float]],
) -> Generator[Event, Any, None]:
    interval = stride * env.dt
    while True:
        series.append((env.now, chain.delta_f))
        logger.debug('t=%g delta_f=%.3e', env.now, chain.delta_f)
        yield env.timeout(interval)


def _sampler(
    env: Environment,
    chain: PolyakovChain,
    schedule: Schedule,
    ks: Sequence[int],
    means: Dict[int, RunningMean],
    samples: Optional[List[complex]],
) -> Generator[Event, Any, None]:
    yield env.timeout(schedule.burn_in_time)
    logger.debug('burn-in done at t=%g', env.now)
    for _ in range(schedule.num_samples):
        yield env.timeout(schedule.sample_interval)
        config = chain.config
        loop = config.product()
        for k in ks:
            means[k].push(_trace_power(loop, k))
        if samples is not None:
            values = (
                chain.last_spectrum.values if chain.last_spectrum is not None
                else None
            )
            samples.extend(complex(s) for s in eigen_phases(config, values))


def _trace_power(loop: np.ndarray, k: int) -> complex:
    return complex(np.trace(np.linalg.matrix_power(loop, k)))


def run_chain(
    params: ChainParams,
    schedule: Schedule,
    strategy: CoolingStrategy,
    observable_ks: Sequence[int],
    *,
    initial: Optional[LinkConfig] = None,
    delta_f_stride: int = DELTA_F_STRIDE,
    divergence_threshold: float = DIVERGENCE_THRESHOLD,
    record_samples: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> ChainReport:
    """Run one complex Langevin chain and estimate ``<O_k>`` for every *k*
    in *observable_ks*.

    The chain starts from *initial* (the identity by default). ``delta_f``
    is logged every *delta_f_stride* steps, starting at time ``0``. A chain
    whose ``delta_f`` exceeds *divergence_threshold* or turns non-finite is
    stopped and returned with :attr:`ChainReport.diverged` set. The noise is
    drawn from :func:`make_rng` with the schedule's seed unless *rng* is
    given.

    Raise :exc:`~gaugecool.exceptions.InvalidInput` for a ``k = 0``
    observable or a stride below ``1``.

    """
    ks = list(observable_ks)
    if 0 in ks:
        raise InvalidInput('k(=0) must be nonzero.')
    if delta_f_stride < 1:
        raise InvalidInput(f'delta_f_stride(={delta_f_stride}) must be >= 1.')
    if rng is None:
        rng = make_rng(schedule.seed)

    chain = PolyakovChain(
        params, strategy, schedule.dt, rng, initial, divergence_threshold
    )
    env = Environment(chain, schedule.dt)
    means = {k: RunningMean() for k in ks}
    series: List[Tuple[float, float]] = []
    samples: Optional[List[complex]] = [] if record_samples else None

    sampler = env.process(
        _sampler(env, chain, schedule, ks, means, samples)
    )
    env.process(_monitor(env, chain, delta_f_stride, series))

    logger.info(
        'chain n=%d N=%d %s dt=%g total time %g',
        params.n, params.N, strategy._desc(), schedule.dt,
        schedule.total_time,
    )
    diverged = False
    try:
        env.run(until=sampler)
    except Divergence as exc:
        diverged = True
        series.append((exc.time, chain.delta_f))
        logger.info('chain diverged: %s', exc)

    estimates = {k: means[k].estimate() for k in ks}
    num_samples = means[ks[0]].count if ks else 0
    logger.info('chain finished at t=%g with %d samples', chain.time,
                num_samples)
    return ChainReport(
        estimates=estimates,
        delta_f_series=series,
        meta={
            'model': 'chain',
            'params': {
                'n': params.n,
                'N': params.N,
                'beta1': [params.beta1.real, params.beta1.imag],
                'beta2': [params.beta2.real, params.beta2.imag],
            },
            'schedule': schedule.to_dict(),
            'strategy': strategy.to_dict(),
            'observables': ks,
            'delta_f_stride': delta_f_stride,
        },
        num_samples=num_samples,
        end_time=chain.time,
        samples=samples,
        diverged=diverged,
    )
