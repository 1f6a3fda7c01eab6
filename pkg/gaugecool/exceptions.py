"""
gaugecool specific exceptions.

"""
from typing import Any, Optional


class GaugeCoolError(Exception):
    """Base class for all gaugecool specific exceptions."""


class InvalidDimension(GaugeCoolError, ValueError):
    """Raised for unsupported group dimensions and for shape mismatches
    between parameters, configurations and noise tables."""


class InvalidInput(GaugeCoolError, ValueError):
    """Raised for non-finite matrices, matrices off the unit-determinant
    manifold and otherwise invalid arguments."""


class SingularDrift(GaugeCoolError, ArithmeticError):
    """Raised when the reduced drift is evaluated at ``s = k*pi``."""


class Excursion(GaugeCoolError):
    """A run left the region where it can be continued.

    :attr:`time` is the Langevin time at which the excursion was detected and
    :attr:`cause` describes what was observed (for example the offending
    unitarity distance).

    """

    def __init__(self, time: float, cause: Optional[Any] = None):
        super().__init__(time, cause)

    def __str__(self) -> str:
        return f'{self.__class__.__name__}(t={self.time:g}, {self.cause!r})'

    @property
    def time(self) -> float:
        """Langevin time of the excursion."""
        return self.args[0]

    @property
    def cause(self) -> Optional[Any]:
        """What triggered the excursion or ``None``."""
        return self.args[1]


class Divergence(Excursion):
    """The link configuration blew up (``delta_f`` above the divergence
    threshold or non-finite entries)."""


class Escape(Excursion):
    """The imaginary part of the reduced variable left the allowed band."""


class ConfigError(GaugeCoolError, ValueError):
    """An experiment configuration was rejected. :attr:`field` names the
    offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(field, message)

    def __str__(self) -> str:
        return f'{self.field}: {self.message}'

    @property
    def field(self) -> str:
        return self.args[0]

    @property
    def message(self) -> str:
        return self.args[1]
