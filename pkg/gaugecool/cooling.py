"""
Gauge cooling: pulling a link configuration back towards ``[SU(n)]^N`` by
a complexified gauge transform that lowers ``|{U}|``.

.. autosummary::

    CoolingStrategy
    NoCooling
    GradientDescent
    Optimal
    CoolingOutcome
    cool_optimal
    cool_gradient
    gradient
    hessian_form
    hessian_matrix
    optimal_gauge
    cooled_norm_bound

Three strategies are available. :class:`NoCooling` leaves the links alone,
:class:`GradientDescent` takes a fixed number of descent steps along the
imaginary gauge directions and :class:`Optimal` jumps straight to the
minimizer, which on a periodic chain is known in closed form: diagonalize the
shifted loop ``U_N U_1 ... U_(N-1) = Q diag(mu) Q^-1`` and set ::

    U_k = diag(|mu|^(1/N))                 k = 1, ..., N-1
    U_N = diag(mu |mu|^(-(N-1)/N))

The cooled squared norm is ``N sum_j |mu_j|^(2/N)``, the infimum over all
gauges.

"""
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from gaugecool.algebra import (
    Spectrum,
    eig,
    expm,
    generator_basis,
    unitarity_distance,
)
from gaugecool.exceptions import InvalidInput
from gaugecool.model import LinkConfig


@dataclass(frozen=True)
class CoolingOutcome:
    """Result of one cooling pass. :attr:`spectrum` is only set by optimal
    cooling."""

    cooled: LinkConfig
    delta_f_before: float
    delta_f_after: float
    spectrum: Optional[Spectrum] = None


def cooled_norm_bound(values: np.ndarray, N: int) -> float:
    """Return ``N sum_j |mu_j|^(2/N)``, the smallest squared norm reachable
    by gauge transforms from a chain whose loop has eigenvalues *values*."""
    return float(N * np.sum(np.abs(values) ** (2 / N)))


def _diagonal_links(values: np.ndarray, N: int) -> np.ndarray:
    n = len(values)
    modulus = np.abs(values)
    links = np.zeros((N, n, n), dtype=complex)
    diagonal = np.arange(n)
    links[:-1, diagonal, diagonal] = modulus ** (1 / N)
    links[-1, diagonal, diagonal] = values * modulus ** (-(N - 1) / N)
    return links


def cool_optimal(config: LinkConfig) -> CoolingOutcome:
    """Apply the optimal gauge transform.

    The eigenvalues of the shifted loop are spread evenly over the links by
    modulus, the phases all go to the last link, and every cooled link is
    diagonal. The loop is never checked for diagonalizability; for a
    (nearly) defective loop the same formula gives links arbitrarily close to
    the infimum and :attr:`Spectrum.diagonalizable` is cleared.

    """
    spectrum = eig(config.shifted_product())
    links = _diagonal_links(spectrum.values, config.N)
    cooled = LinkConfig(links, check=False)
    return CoolingOutcome(
        cooled,
        unitarity_distance(config),
        unitarity_distance(cooled),
        spectrum,
    )


def optimal_gauge(config: LinkConfig) -> np.ndarray:
    """Return the gauge matrices that realize :func:`cool_optimal`.

    With ``U_N U_1 ... U_(N-1) = Q L Q^-1`` and ``D = (L L^+)^(1/2N)`` the
    gauge is ``V_k = U_k ... U_(N-1) Q D^-(N-k)`` for ``k < N`` and
    ``V_N = Q``. Feeding it to :func:`~gaugecool.model.gauge_transform`
    reproduces the cooled links whenever the loop is diagonalizable.

    """
    spectrum = eig(config.shifted_product())
    N, n = config.N, config.n
    modulus = np.abs(spectrum.values)
    gauge = np.empty((N, n, n), dtype=complex)
    gauge[-1] = spectrum.basis
    for k in range(N - 2, -1, -1):
        # gauge[k] carries the partial product U_k ... U_(N-1) (1-based).
        gauge[k] = config.links[k] @ gauge[k + 1]
    for k in range(N - 1):
        gauge[k] = gauge[k] * modulus ** (-(N - 1 - k) / N)
    return gauge


def gradient(config: LinkConfig) -> np.ndarray:
    """Return ``G[a, k] = 2 tr[l_a (U_k U_k^+ - U_(k-1)^+ U_(k-1))]``, the
    derivative of ``|{U}|**2`` along the imaginary gauge direction ``Y_ak``
    at the identity gauge. Derivatives along the real directions vanish."""
    links = config.links
    previous = np.roll(links, 1, axis=0)
    imbalance = (
        links @ np.conj(np.swapaxes(links, -1, -2))
        - np.conj(np.swapaxes(previous, -1, -2)) @ previous
    )
    return 2 * generator_basis(config.n).project(imbalance).real


def cool_gradient(
    config: LinkConfig, alpha: float, dt: float, iters: int
) -> CoolingOutcome:
    """Take *iters* gradient descent steps of length ``alpha * dt`` on the
    imaginary gauge parameters::

        Y_ak <- -2 alpha dt tr[l_a (U_k U_k^+ - U_(k-1)^+ U_(k-1))]
        U_k  <- exp(Y_k . l) U_k exp(-Y_(k+1) . l)

    No line search and no stopping criterion are used. A descent that blows
    up is reported through ``delta_f_after``; iteration stops as soon as the
    links are no longer finite.

    """
    if alpha <= 0:
        raise InvalidInput(f'alpha(={alpha}) must be > 0.')
    if dt <= 0:
        raise InvalidInput(f'dt(={dt}) must be > 0.')
    if iters < 1:
        raise InvalidInput(f'iters(={iters}) must be >= 1.')

    basis = generator_basis(config.n)
    step = alpha * dt
    links = config.links
    for _ in range(iters):
        y = -step * gradient(LinkConfig(links, check=False))
        if not np.all(np.isfinite(y)):
            break
        generator = basis.combine(y)
        links = (
            expm(generator) @ links @ np.roll(expm(-generator), -1, axis=0)
        )
    cooled = LinkConfig(links, check=False)
    return CoolingOutcome(
        cooled, unitarity_distance(config), unitarity_distance(cooled)
    )


def hessian_form(config: LinkConfig, v: np.ndarray) -> float:
    """Return ``v^T H v`` for the Hessian ``H`` of ``|{U}|**2`` in the
    imaginary gauge parameters, evaluated in closed form as
    ``4 sum_k |U_k M_(k+1) - M_k U_k|_F**2`` with ``M_k = sum_a v_ak l_a``.

    *v* is a real ``(n**2 - 1, N)`` table. The result is never negative,
    so ``|{U}|**2`` is convex along every imaginary gauge direction.

    """
    v = np.asarray(v, dtype=float)
    _check_table(config, v)
    m = generator_basis(config.n).combine(v)
    commutator = config.links @ np.roll(m, -1, axis=0) - m @ config.links
    return 4 * float(np.sum(np.abs(commutator) ** 2))


def hessian_matrix(config: LinkConfig) -> np.ndarray:
    """Return the full Hessian of ``|{U}|**2`` in the imaginary gauge
    parameters as an ``((n**2-1) N, (n**2-1) N)`` real matrix.

    Rows and columns are indexed by ``a * N + k``, matching ``v.ravel()``
    of a ``(n**2 - 1, N)`` table. Neighbouring links couple through
    ``-4 tr(l_a U_k l_b U_k^+)``; the diagonal blocks are
    ``2 tr[{l_a, l_b} (U_k U_k^+ + U_(k-1)^+ U_(k-1))]``. For ``N <= 2``
    coinciding neighbour blocks add up.

    """
    lam = generator_basis(config.n).generators
    links = config.links
    N = config.N
    dagger = np.conj(np.swapaxes(links, -1, -2))
    gram = links @ dagger + np.roll(dagger @ links, 1, axis=0)
    anticommutators = lam[:, None] @ lam[None, :] + lam[None, :] @ lam[:, None]

    size = len(lam)
    hessian = np.zeros((size, N, size, N))
    for k in range(N):
        hessian[:, k, :, k] += 2 * np.einsum(
            'abij,ji->ab', anticommutators, gram[k]
        ).real
        # Coupling of link k to its successor k + 1 through U_k.
        coupling = -4 * np.einsum(
            'aij,jk,bkl,li->ab', lam, links[k], lam, dagger[k]
        ).real
        hessian[:, k, :, (k + 1) % N] += coupling
        hessian[:, (k + 1) % N, :, k] += coupling.T
    return hessian.reshape(size * N, size * N)


def _check_table(config: LinkConfig, v: np.ndarray) -> None:
    expected = (config.n ** 2 - 1, config.N)
    if v.shape != expected:
        raise InvalidInput(f'table must have shape {expected}, got {v.shape}.')


class CoolingStrategy:
    """How a chain is cooled after every Langevin step.

    Subclasses implement :meth:`cool`; :meth:`to_dict` and
    :func:`strategy_from_dict` provide the echo stored with run reports.

    """

    kind: str = ''

    def __repr__(self) -> str:
        return f'<{self._desc()} object at {id(self):#x}>'

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoolingStrategy):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.to_dict().items())))

    def _desc(self) -> str:
        return f'{self.__class__.__name__}()'

    def cool(self, config: LinkConfig, dt: float) -> CoolingOutcome:
        raise NotImplementedError(self)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind}


class NoCooling(CoolingStrategy):
    """Plain complex Langevin: links are left as they are."""

    kind = 'none'

    def cool(self, config: LinkConfig, dt: float) -> CoolingOutcome:
        delta_f = unitarity_distance(config)
        return CoolingOutcome(config, delta_f, delta_f)


class GradientDescent(CoolingStrategy):
    """*iters* descent steps of length ``alpha * dt`` per Langevin step
    (see :func:`cool_gradient`).

    Raise :exc:`~gaugecool.exceptions.InvalidInput` if ``alpha <= 0`` or
    ``iters < 1``.

    """

    kind = 'gradient'

    def __init__(self, alpha: float, iters: int = 5):
        if not alpha > 0:
            raise InvalidInput(f'alpha(={alpha}) must be > 0.')
        if iters < 1:
            raise InvalidInput(f'iters(={iters}) must be >= 1.')
        self.alpha = float(alpha)
        self.iters = int(iters)

    def _desc(self) -> str:
        return (
            f'{self.__class__.__name__}(alpha={self.alpha}, '
            f'iters={self.iters})'
        )

    def cool(self, config: LinkConfig, dt: float) -> CoolingOutcome:
        return cool_gradient(config, self.alpha, dt, self.iters)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'alpha': self.alpha, 'iters': self.iters}


class Optimal(CoolingStrategy):
    """Closed-form optimal cooling (see :func:`cool_optimal`)."""

    kind = 'optimal'

    def cool(self, config: LinkConfig, dt: float) -> CoolingOutcome:
        return cool_optimal(config)


def strategy_from_dict(data: Dict[str, Any]) -> CoolingStrategy:
    """Rebuild a strategy from :meth:`CoolingStrategy.to_dict` output.

    Raise :exc:`~gaugecool.exceptions.InvalidInput` for unknown kinds.

    """
    kind = data.get('kind')
    if kind == NoCooling.kind:
        return NoCooling()
    if kind == Optimal.kind:
        return Optimal()
    if kind == GradientDescent.kind:
        return GradientDescent(data.get('alpha', 1.0), data.get('iters', 5))
    raise InvalidInput(f'unknown cooling strategy "{kind}".')
