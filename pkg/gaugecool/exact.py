"""
Exact expectation values of loop observables by quadrature over the
eigenvalue angles (Weyl's integration formula).

.. autosummary::

    QuadratureSpec
    su3_expectation
    su2_expectation

Both integrands are smooth and periodic in every angle, so the trapezoid
rule on a uniform grid (a plain mean over grid points) converges
exponentially. The couplings may be complex; the integration contour stays
on the real torus.

"""
from dataclasses import dataclass

import numpy as np

from gaugecool.exceptions import InvalidInput

MIN_POINTS = 64


@dataclass(frozen=True)
class QuadratureSpec:
    """Number of grid points per angle on ``[-pi, pi)``."""

    points_per_dim: int = 512

    def __post_init__(self) -> None:
        if self.points_per_dim < MIN_POINTS:
            raise InvalidInput(
                f'points_per_dim(={self.points_per_dim}) must be >= '
                f'{MIN_POINTS}.'
            )

    def angles(self) -> np.ndarray:
        p = self.points_per_dim
        return -np.pi + 2 * np.pi * np.arange(p) / p


def _check_k(k: int) -> None:
    if k == 0:
        raise InvalidInput('k(=0) must be nonzero.')


def su3_expectation(
    k: int,
    beta1: complex,
    beta2: complex,
    quad: QuadratureSpec = QuadratureSpec(),
) -> complex:
    """Return ``<tr U^k>`` for one SU(3) link with weight
    ``exp(beta1 tr U + beta2 tr U^-1)``.

    With eigenvalues ``z1 = e^(i phi1)``, ``z2 = e^(i phi2)`` and
    ``z3 = e^(-i (phi1 + phi2))`` the Haar measure reduces to
    ``|(z1 - z2)(z1 - z3)(z2 - z3)|^2 dphi1 dphi2``.

    Raise :exc:`~gaugecool.exceptions.InvalidInput` for ``k = 0``.

    """
    _check_k(k)
    phi = quad.angles()
    phi1, phi2 = np.meshgrid(phi, phi, indexing='ij')
    z = np.exp(1j * np.stack([phi1, phi2, -phi1 - phi2]))

    vandermonde = (z[0] - z[1]) * (z[0] - z[2]) * (z[1] - z[2])
    weight = np.abs(vandermonde) ** 2 * np.exp(
        beta1 * z.sum(axis=0) + beta2 * (1 / z).sum(axis=0)
    )
    observable = (z ** k).sum(axis=0)
    return complex(np.sum(weight * observable) / np.sum(weight))


def su2_expectation(
    k: int, beta: complex, quad: QuadratureSpec = QuadratureSpec()
) -> complex:
    """Return ``<2 cos(k s)>`` under the weight ``e^(2 beta cos s) sin^2 s``
    on ``[-pi, pi)``, the SU(2) loop expectation for
    ``beta = beta1 + beta2``.

    Raise :exc:`~gaugecool.exceptions.InvalidInput` for ``k = 0``.

    """
    _check_k(k)
    s = quad.angles()
    weight = np.exp(2 * complex(beta) * np.cos(s)) * np.sin(s) ** 2
    return complex(np.sum(weight * 2 * np.cos(k * s)) / np.sum(weight))
