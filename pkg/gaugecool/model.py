"""
The periodic Polyakov chain on ``[SL(n, C)]^N``: action, analytic drift,
loop observables and complexified gauge transforms.

.. autosummary::

    ChainParams
    LinkConfig
    DriftTable
    action
    loop_observable
    drift
    gauge_transform
    eigen_phases

"""
import cmath
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from gaugecool.algebra import (
    ComplexMatrix,
    GeneratorBasis,
    expm,
    generator_basis,
)
from gaugecool.exceptions import InvalidDimension, InvalidInput

DET_TOLERANCE = 1e-8
"""Allowed ``|det U - 1|`` for links and gauge matrices."""


@dataclass(frozen=True)
class ChainParams:
    """Group dimension *n*, number of links *N* and the two couplings of the
    action ``S = -tr(beta1 U_1...U_N + beta2 U_N^-1...U_1^-1)``."""

    n: int
    N: int
    beta1: complex
    beta2: complex

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidDimension(f'n(={self.n}) must be >= 2.')
        if self.N < 1:
            raise InvalidDimension(f'N(={self.N}) must be >= 1.')
        object.__setattr__(self, 'beta1', complex(self.beta1))
        object.__setattr__(self, 'beta2', complex(self.beta2))

    @classmethod
    def from_chemical_potential(
        cls, n: int, N: int, beta: complex, kappa: float, mu: float
    ) -> 'ChainParams':
        """Couplings of a heavy-quark chain at chemical potential *mu*:
        ``beta1 = beta + kappa e^mu`` and
        ``beta2 = conj(beta) + kappa e^-mu``."""
        beta = complex(beta)
        return cls(
            n,
            N,
            beta + kappa * cmath.exp(mu),
            beta.conjugate() + kappa * cmath.exp(-mu),
        )

    @property
    def basis(self) -> GeneratorBasis:
        return generator_basis(self.n)


class LinkConfig:
    """An immutable ordered list of links ``U_1, ..., U_N`` with periodic
    indexing (``U_0`` is ``U_N``).

    The links are stored as a read-only ``(N, n, n)`` array. Every link must
    have unit determinant within :data:`DET_TOLERANCE`; raise
    :exc:`~gaugecool.exceptions.InvalidInput` otherwise. Pass
    ``check=False`` only for links produced by determinant-preserving
    updates.

    """

    __slots__ = ('_links',)

    def __init__(self, links: np.ndarray, check: bool = True):
        links = np.array(links, dtype=complex)
        if links.ndim == 2:
            links = links[None]
        if links.ndim != 3 or links.shape[1] != links.shape[2]:
            raise InvalidDimension(
                f'links must have shape (N, n, n), got {links.shape}.'
            )
        if check:
            if not np.all(np.isfinite(links)):
                raise InvalidInput('links have non-finite entries.')
            dets = np.linalg.det(links)
            bad = np.flatnonzero(np.abs(dets - 1) > DET_TOLERANCE)
            if bad.size:
                raise InvalidInput(
                    f'link {bad[0] + 1} has det(={dets[bad[0]]:.6g}) != 1.'
                )
        links.setflags(write=False)
        self._links = links

    def __repr__(self) -> str:
        return f'<LinkConfig n={self.n} N={self.N} at {id(self):#x}>'

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinkConfig):
            return NotImplemented
        return np.array_equal(self._links, other._links)

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def identity(cls, n: int, N: int) -> 'LinkConfig':
        """The cold start: every link is the identity."""
        return cls(np.broadcast_to(np.eye(n), (N, n, n)), check=False)

    @classmethod
    def random(
        cls,
        n: int,
        N: int,
        rng: np.random.Generator,
        spread: float = 1.0,
        imaginary: float = 0.0,
    ) -> 'LinkConfig':
        """Draw links ``exp(i sum_a (x_a + i imaginary y_a) l_a)`` with
        standard normal ``x`` scaled by *spread* and standard normal ``y``.

        ``imaginary = 0`` gives links in SU(n); a positive value moves them
        into SL(n, C) by an amount controlled by *imaginary*.

        """
        basis = generator_basis(n)
        shape = (len(basis), N)
        coefficients = spread * rng.standard_normal(shape)
        if imaginary:
            coefficients = coefficients + 1j * imaginary * rng.standard_normal(
                shape
            )
        return cls(expm(1j * basis.combine(coefficients)), check=False)

    @property
    def links(self) -> np.ndarray:
        return self._links

    @property
    def n(self) -> int:
        return self._links.shape[1]

    @property
    def N(self) -> int:
        return self._links.shape[0]

    def __len__(self) -> int:
        return self.N

    def __getitem__(self, k: int) -> ComplexMatrix:
        return self._links[k]

    def norm_squared(self) -> float:
        """``sum_k |U_k|_F**2``."""
        return float(np.sum(np.abs(self._links) ** 2))

    def product(self) -> ComplexMatrix:
        """The Polyakov loop ``U_1 U_2 ... U_N``."""
        if self.N == 1:
            return self._links[0].copy()
        return np.linalg.multi_dot(list(self._links))

    def shifted_product(self) -> ComplexMatrix:
        """The loop started at the last link, ``U_N U_1 ... U_(N-1)``. It
        is conjugate to :meth:`product` and its eigenvectors define the
        optimal cooling gauge."""
        if self.N == 1:
            return self._links[0].copy()
        return np.linalg.multi_dot([self._links[-1], *self._links[:-1]])

    def cyclic_products(self) -> np.ndarray:
        """Return the ``(N, n, n)`` stack of ``P_k = U_k ... U_N U_1 ...
        U_(k-1)`` from cached prefix and suffix products."""
        N, n = self.N, self.n
        prefix = np.empty((N + 1, n, n), dtype=complex)
        suffix = np.empty((N + 1, n, n), dtype=complex)
        prefix[0] = suffix[N] = np.eye(n)
        for k in range(N):
            prefix[k + 1] = prefix[k] @ self._links[k]
            suffix[N - k - 1] = self._links[N - k - 1] @ suffix[N - k]
        return suffix[:N] @ prefix[:N]

    def determinants(self) -> np.ndarray:
        return np.linalg.det(self._links)

    def renormalized(self) -> 'LinkConfig':
        """Return a copy with links drifted off the unit-determinant
        manifold (beyond :data:`DET_TOLERANCE`) rescaled by the principal
        root ``det(U_k)**(-1/n)``."""
        dets = self.determinants()
        drifted = np.abs(dets - 1) > DET_TOLERANCE
        if not np.any(drifted):
            return self
        scale = np.where(drifted, dets ** (-1 / self.n), 1)
        return LinkConfig(self._links * scale[:, None, None], check=False)


@dataclass(frozen=True)
class DriftTable:
    """The Lie derivatives ``K[a, k] = D_ak S``; :attr:`entries` has shape
    ``(n**2 - 1, N)``."""

    entries: np.ndarray

    def __getitem__(self, index: Tuple[int, int]) -> complex:
        return complex(self.entries[index])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape


def _check_dims(params: ChainParams, config: LinkConfig) -> None:
    if (params.n, params.N) != (config.n, config.N):
        raise InvalidDimension(
            f'config has (n, N)=({config.n}, {config.N}), params expect '
            f'({params.n}, {params.N}).'
        )


def action(params: ChainParams, config: LinkConfig) -> complex:
    """Return ``S = -tr(beta1 U_1...U_N + beta2 U_N^-1...U_1^-1)``."""
    _check_dims(params, config)
    loop = config.product()
    return complex(
        -(params.beta1 * np.trace(loop)
          + params.beta2 * np.trace(np.linalg.inv(loop)))
    )


def loop_observable(config: LinkConfig, k: int) -> complex:
    """Return ``O_k = tr[(U_1...U_N)^k]``; negative *k* uses the inverse
    loop.

    Raise :exc:`~gaugecool.exceptions.InvalidInput` for ``k = 0``.

    """
    if k == 0:
        raise InvalidInput('k(=0) must be nonzero.')
    return complex(np.trace(np.linalg.matrix_power(config.product(), k)))


def drift(params: ChainParams, config: LinkConfig) -> DriftTable:
    """Return the drift table ``K[a, k] = D_ak S``.

    With ``P_k = U_k...U_N U_1...U_(k-1)`` the left Lie derivative of the
    action is ``-i beta1 tr(l_a P_k) + i beta2 tr(l_a P_k^-1)``.

    """
    _check_dims(params, config)
    loops = config.cyclic_products()
    basis = params.basis
    entries = (
        -1j * params.beta1 * basis.project(loops)
        + 1j * params.beta2 * basis.project(np.linalg.inv(loops))
    )
    return DriftTable(entries)


def gauge_transform(
    config: LinkConfig, gauge: Sequence[ComplexMatrix]
) -> LinkConfig:
    """Return the links ``V_k^-1 U_k V_(k+1)`` with ``V_(N+1) = V_1``.

    Raise :exc:`~gaugecool.exceptions.InvalidInput` if a gauge matrix does
    not have unit determinant and
    :exc:`~gaugecool.exceptions.InvalidDimension` if there are not *N* of
    them.

    """
    gauge = np.asarray(gauge, dtype=complex)
    if gauge.shape != config.links.shape:
        raise InvalidDimension(
            f'gauge must have shape {config.links.shape}, got {gauge.shape}.'
        )
    dets = np.linalg.det(gauge)
    bad = np.flatnonzero(
        ~np.isfinite(dets) | (np.abs(dets - 1) > DET_TOLERANCE)
    )
    if bad.size:
        raise InvalidInput(
            f'gauge matrix {bad[0] + 1} has det(={dets[bad[0]]:.6g}) != 1.'
        )
    inverse = np.linalg.inv(gauge)
    return LinkConfig(
        inverse @ config.links @ np.roll(gauge, -1, axis=0), check=False
    )


def eigen_phases(
    config: LinkConfig, spectrum_values: Optional[np.ndarray] = None
) -> np.ndarray:
    """Return the complex angles ``s_j = i log mu_j`` of the loop
    eigenvalues ``mu_j = exp(-i s_j)``. The real part is ``-arg(mu_j)``."""
    if spectrum_values is None:
        spectrum_values = np.linalg.eigvals(config.product())
    return 1j * np.log(spectrum_values)
