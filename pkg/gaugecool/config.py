"""
Experiment configurations of the command line tool.

.. autosummary::

    ChainConfig
    ReducedConfig
    ExactConfig
    RegionConfig
    FlowConfig
    BenchConfig
    output_dir

Every configuration is a frozen dataclass built by
:meth:`~ExperimentConfig.from_sources` from the values of a JSON file, which
explicitly given command line flags override. Complex numbers are written
as ``[re, im]`` pairs, as numbers or as strings like ``"1+0.2j"``.
:meth:`~ExperimentConfig.to_dict` gives the echo stored with every report,
which :meth:`~ExperimentConfig.from_sources` accepts back.

"""
import dataclasses
import math
import os
from dataclasses import dataclass, field
from typing import (
    Any,
    Callable,
    ClassVar,
    Dict,
    Mapping,
    Optional,
    Tuple,
    Type,
    TypeVar,
)

from gaugecool.cooling import (
    CoolingStrategy,
    GradientDescent,
    NoCooling,
    Optimal,
)
from gaugecool.exceptions import ConfigError, GaugeCoolError
from gaugecool.exact import MIN_POINTS
from gaugecool.langevin import Schedule
from gaugecool.model import ChainParams
from gaugecool.reduced import ReducedParams, ReducedState

OUTPUT_DIR_ENV = 'GAUGECOOL_OUTPUT_DIR'
"""Environment variable naming the default output directory."""

C = TypeVar('C', bound='ExperimentConfig')
Parser = Callable[[Any], Any]


def output_dir(flag: Optional[str] = None) -> str:
    """The output directory: *flag*, else ``$GAUGECOOL_OUTPUT_DIR``, else
    the current directory."""
    return flag or os.environ.get(OUTPUT_DIR_ENV) or os.curdir


def _int(value: Any) -> int:
    if isinstance(value, bool) or (
        isinstance(value, float) and not value.is_integer()
    ):
        raise ValueError(f'{value!r} is not an integer')
    return int(value)


def _float(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError(f'{value!r} is not a number')
    return float(value)


def _complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(_float(re), _float(im))
    if isinstance(value, str):
        return complex(value.replace(' ', '').replace('i', 'j'))
    if isinstance(value, bool):
        raise ValueError(f'{value!r} is not a number')
    return complex(value)


def _optional(parse: Parser) -> Parser:
    def parse_optional(value: Any) -> Any:
        return None if value is None else parse(value)
    return parse_optional


def _bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ('true', 'false'):
        return value.lower() == 'true'
    raise ValueError(f'{value!r} is not a boolean')


def _str(value: Any) -> str:
    if not isinstance(value, str):
        raise ValueError(f'{value!r} is not a string')
    return value


def _tuple_of(parse: Parser) -> Parser:
    def parse_tuple(value: Any) -> Tuple[Any, ...]:
        if isinstance(value, str):
            value = [v for v in value.split(',') if v.strip()]
        return tuple(parse(v) for v in value)
    return parse_tuple


def _option(default: Any, parse: Parser) -> Any:
    return field(default=default, metadata={'parse': parse})


def _plain(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    return value


class ExperimentConfig:
    """Shared behaviour of the configuration dataclasses."""

    command: ClassVar[str] = ''

    @classmethod
    def from_sources(
        cls: Type[C],
        file_values: Optional[Mapping[str, Any]] = None,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> C:
        """Build a validated configuration from the *file_values* of a JSON
        file and the *overrides* given on the command line; overrides that
        are ``None`` are ignored.

        Raise :exc:`~gaugecool.exceptions.ConfigError` naming the first
        unknown or invalid field.

        """
        fields = {f.name: f for f in dataclasses.fields(cls)}  # type: ignore
        values: Dict[str, Any] = {}
        for name, value in (file_values or {}).items():
            if name not in fields:
                raise ConfigError(name, 'unknown configuration key.')
            values[name] = value
        for name, value in (overrides or {}).items():
            if value is not None:
                values[name] = value

        parsed = {}
        for name, value in values.items():
            try:
                parsed[name] = fields[name].metadata['parse'](value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(name, f'invalid value {value!r} ({exc}).')
        config = cls(**parsed)  # type: ignore
        config.validate()
        return config

    def validate(self) -> None:
        """Raise :exc:`~gaugecool.exceptions.ConfigError` for the first
        invalid field."""
        for f in dataclasses.fields(self):  # type: ignore
            value = getattr(self, f.name)
            numbers = value if isinstance(value, tuple) else (value,)
            for number in numbers:
                if isinstance(number, (float, complex)) and not (
                    math.isfinite(abs(number))
                ):
                    raise ConfigError(f.name, f'{number} is not finite.')
        self._validate()

    def _validate(self) -> None:
        pass

    def to_dict(self) -> Dict[str, Any]:
        return {
            f.name: _plain(getattr(self, f.name))
            for f in dataclasses.fields(self)  # type: ignore
        }


def _positive(name: str, value: float) -> None:
    if not value > 0:
        raise ConfigError(name, f'{value} must be > 0.')


def _check_schedule(config: Any) -> Schedule:
    try:
        return Schedule(
            config.dt, config.burn_in_time, config.sample_interval,
            config.num_samples, config.seed,
        )
    except GaugeCoolError as exc:
        name = str(exc).split('(', 1)[0]
        raise ConfigError(name, str(exc)) from None


@dataclass(frozen=True)
class _Couplings:
    beta1: Optional[complex] = _option(None, _optional(_complex))
    beta2: Optional[complex] = _option(None, _optional(_complex))
    beta: complex = _option(2.0 + 0j, _complex)
    kappa: float = _option(0.1, _float)
    mu: float = _option(1.0, _float)

    def couplings(self) -> Tuple[complex, complex]:
        """``(beta1, beta2)``: given directly or built from
        ``(beta, kappa, mu)``."""
        if self.beta1 is not None and self.beta2 is not None:
            return self.beta1, self.beta2
        params = ChainParams.from_chemical_potential(
            2, 1, self.beta, self.kappa, self.mu
        )
        return params.beta1, params.beta2

    def _check_couplings(self) -> None:
        if (self.beta1 is None) != (self.beta2 is None):
            name = 'beta2' if self.beta2 is None else 'beta1'
            raise ConfigError(name, 'beta1 and beta2 must be given together.')


STRATEGIES = ('none', 'gradient', 'optimal')


@dataclass(frozen=True)
class ChainConfig(_Couplings, ExperimentConfig):
    """Settings of ``gaugecool chain``. The defaults are the SU(3) chain
    with 16 links at ``beta = 2``, ``kappa = 0.1``, ``mu = 1``, optimally
    cooled up to ``t = 2``."""

    command: ClassVar[str] = 'chain'

    n: int = _option(3, _int)
    N: int = _option(16, _int)
    cooling: str = _option('optimal', _str)
    alpha: float = _option(1.0, _float)
    iters: int = _option(5, _int)
    dt: float = _option(2e-5, _float)
    burn_in_time: float = _option(0.5, _float)
    sample_interval: float = _option(2e-3, _float)
    num_samples: int = _option(750, _int)
    seed: int = _option(0, _int)
    ks: Tuple[int, ...] = _option((1, 2, 3, -1, -2, -3), _tuple_of(_int))
    delta_f_stride: int = _option(100, _int)
    divergence_threshold: float = _option(1e6, _float)
    record_samples: bool = _option(False, _bool)
    name: str = _option('chain', _str)

    def _validate(self) -> None:
        if not 2 <= self.n <= 4:
            raise ConfigError('n', f'{self.n} must lie in [2, 4].')
        if self.N < 1:
            raise ConfigError('N', f'{self.N} must be >= 1.')
        if self.cooling not in STRATEGIES:
            raise ConfigError(
                'cooling', f'"{self.cooling}" is not one of {STRATEGIES}.'
            )
        _positive('alpha', self.alpha)
        if self.iters < 1:
            raise ConfigError('iters', f'{self.iters} must be >= 1.')
        if not self.ks or 0 in self.ks:
            raise ConfigError('ks', 'must be a nonempty list without 0.')
        if self.delta_f_stride < 1:
            raise ConfigError(
                'delta_f_stride', f'{self.delta_f_stride} must be >= 1.'
            )
        _positive('divergence_threshold', self.divergence_threshold)
        self._check_couplings()
        _check_schedule(self)

    def params(self) -> ChainParams:
        beta1, beta2 = self.couplings()
        return ChainParams(self.n, self.N, beta1, beta2)

    def schedule(self) -> Schedule:
        return _check_schedule(self)

    def strategy(self) -> CoolingStrategy:
        if self.cooling == 'gradient':
            return GradientDescent(self.alpha, self.iters)
        if self.cooling == 'optimal':
            return Optimal()
        return NoCooling()


@dataclass(frozen=True)
class ReducedConfig(ExperimentConfig):
    """Settings of ``gaugecool reduced``. The defaults are the confined
    point ``(A, B) = (1, 0.2)`` with about 10**7 steps."""

    command: ClassVar[str] = 'reduced'

    A: float = _option(1.0, _float)
    B: float = _option(0.2, _float)
    dt: float = _option(1e-5, _float)
    burn_in_time: float = _option(3.0, _float)
    sample_interval: float = _option(0.1, _float)
    num_samples: int = _option(1000, _int)
    seed: int = _option(0, _int)
    ks: Tuple[int, ...] = _option((1, 2, 3), _tuple_of(_int))
    x0: float = _option(0.5, _float)
    y0: float = _option(0.0, _float)
    y_bound: float = _option(30.0, _float)
    cap_factor: float = _option(10.0, _float)
    record_samples: bool = _option(False, _bool)
    name: str = _option('reduced', _str)

    def _validate(self) -> None:
        if not self.ks or 0 in self.ks:
            raise ConfigError('ks', 'must be a nonempty list without 0.')
        _positive('y_bound', self.y_bound)
        _positive('cap_factor', self.cap_factor)
        if abs(self.y0) > self.y_bound:
            raise ConfigError('y0', f'{self.y0} lies outside y_bound.')
        _check_schedule(self)

    def params(self) -> ReducedParams:
        return ReducedParams(self.A, self.B)

    def schedule(self) -> Schedule:
        return _check_schedule(self)

    def initial(self) -> ReducedState:
        return ReducedState(self.x0, self.y0)


@dataclass(frozen=True)
class ExactConfig(_Couplings, ExperimentConfig):
    """Settings of ``gaugecool exact``. For ``su3`` the couplings are
    ``beta1``/``beta2`` or ``(beta, kappa, mu)``; for ``su2`` they are
    ``beta1``/``beta2`` or *beta*, the coupling sum ``A + i B`` itself."""

    command: ClassVar[str] = 'exact'

    group: str = _option('su3', _str)
    k: int = _option(1, _int)
    points: int = _option(512, _int)

    def _validate(self) -> None:
        if self.group not in ('su2', 'su3'):
            raise ConfigError('group', f'"{self.group}" must be su2 or su3.')
        if self.k == 0:
            raise ConfigError('k', 'must be nonzero.')
        if self.points < MIN_POINTS:
            raise ConfigError(
                'points', f'{self.points} must be >= {MIN_POINTS}.'
            )
        self._check_couplings()

    def su2_beta(self) -> complex:
        """The SU(2) coupling sum ``beta1 + beta2``, or *beta* when the
        pair is not given."""
        if self.beta1 is not None and self.beta2 is not None:
            return ReducedParams.from_couplings(self.beta1, self.beta2).beta
        return self.beta


@dataclass(frozen=True)
class RegionConfig(ExperimentConfig):
    """Settings of ``gaugecool region``: a point query when both *a* and
    *b* are given, otherwise the boundary traced over *a_count* values of
    ``A`` in ``[a_min, a_max]``."""

    command: ClassVar[str] = 'region'

    a: Optional[float] = _option(None, _optional(_float))
    b: Optional[float] = _option(None, _optional(_float))
    a_min: float = _option(-2.55, _float)
    a_max: float = _option(2.55, _float)
    a_count: int = _option(51, _int)
    tol: float = _option(1e-4, _float)
    eta_samples: int = _option(1000, _int)
    name: str = _option('region', _str)

    @property
    def is_query(self) -> bool:
        return self.a is not None and self.b is not None

    def _validate(self) -> None:
        if (self.a is None) != (self.b is None):
            raise ConfigError(
                'b' if self.b is None else 'a',
                'a and b must be given together.',
            )
        if not self.a_min <= self.a_max:
            raise ConfigError('a_max', f'{self.a_max} must be >= a_min.')
        if self.a_count < 1:
            raise ConfigError('a_count', f'{self.a_count} must be >= 1.')
        _positive('tol', self.tol)
        if self.eta_samples < 1000:
            raise ConfigError(
                'eta_samples', f'{self.eta_samples} must be >= 1000.'
            )


@dataclass(frozen=True)
class FlowConfig(ExperimentConfig):
    """Settings of ``gaugecool flow``."""

    command: ClassVar[str] = 'flow'

    A: float = _option(0.0, _float)
    B: float = _option(0.0, _float)
    x_count: int = _option(41, _int)
    y_count: int = _option(41, _int)
    bounds: Tuple[float, ...] = _option(
        (-math.pi, math.pi, -3.0, 3.0), _tuple_of(_float)
    )
    name: str = _option('flow', _str)

    def _validate(self) -> None:
        if self.x_count < 2:
            raise ConfigError('x_count', f'{self.x_count} must be >= 2.')
        if self.y_count < 2:
            raise ConfigError('y_count', f'{self.y_count} must be >= 2.')
        if len(self.bounds) != 4:
            raise ConfigError('bounds', 'expected x_min,x_max,y_min,y_max.')
        x_min, x_max, y_min, y_max = self.bounds
        if not (x_min < x_max and y_min < y_max):
            raise ConfigError('bounds', f'{self.bounds} must be increasing.')


@dataclass(frozen=True)
class BenchConfig(_Couplings, ExperimentConfig):
    """Settings of ``gaugecool cool-bench``: one chain per cooling strategy
    (no cooling, gradient descent for every alpha in *alphas*, optimal),
    all driven by the noise stream of *seed*."""

    command: ClassVar[str] = 'cool-bench'

    n: int = _option(3, _int)
    N: int = _option(16, _int)
    dt: float = _option(2e-5, _float)
    total_time: float = _option(1.0, _float)
    alphas: Tuple[float, ...] = _option((0.4, 1.0), _tuple_of(_float))
    iters: int = _option(5, _int)
    seed: int = _option(0, _int)
    delta_f_stride: int = _option(100, _int)
    workers: int = _option(1, _int)
    name: str = _option('cool-bench', _str)

    def _validate(self) -> None:
        if not 2 <= self.n <= 4:
            raise ConfigError('n', f'{self.n} must lie in [2, 4].')
        if self.N < 1:
            raise ConfigError('N', f'{self.N} must be >= 1.')
        for alpha in self.alphas:
            _positive('alphas', alpha)
        if self.iters < 1:
            raise ConfigError('iters', f'{self.iters} must be >= 1.')
        if self.delta_f_stride < 1:
            raise ConfigError(
                'delta_f_stride', f'{self.delta_f_stride} must be >= 1.'
            )
        if self.workers < 1:
            raise ConfigError('workers', f'{self.workers} must be >= 1.')
        self._check_couplings()
        _positive('dt', self.dt)
        try:
            self.schedule()
        except GaugeCoolError as exc:
            raise ConfigError('total_time', str(exc)) from None

    def params(self) -> ChainParams:
        beta1, beta2 = self.couplings()
        return ChainParams(self.n, self.N, beta1, beta2)

    def schedule(self) -> Schedule:
        return Schedule(self.dt, 0.0, self.total_time, 1, self.seed)

    def strategies(self) -> Dict[str, CoolingStrategy]:
        """The compared strategies by label."""
        strategies: Dict[str, CoolingStrategy] = {'none': NoCooling()}
        for alpha in self.alphas:
            strategies[f'gradient-{alpha:g}'] = GradientDescent(
                alpha, self.iters
            )
        strategies['optimal'] = Optimal()
        return strategies


CONFIGS: Dict[str, Type[ExperimentConfig]] = {
    cls.command: cls
    for cls in (
        ChainConfig, ReducedConfig, ExactConfig, RegionConfig, FlowConfig,
        BenchConfig,
    )
}
"""Configuration class of every subcommand."""
