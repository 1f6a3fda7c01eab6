"""
Small dense complex linear algebra and the SU(n) Lie algebra.

.. autosummary::

    generator_basis
    expm
    eig
    unitarity_distance
    active_generators

Matrices are plain :class:`numpy.ndarray` objects of dtype ``complex128``;
stacks of matrices carry the stack index first (``(N, n, n)``). Every array
returned from this module is flagged read-only so values can be shared
freely.

"""
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, List

import numpy as np
import scipy.linalg

from gaugecool.exceptions import InvalidDimension, InvalidInput

if TYPE_CHECKING:  # Avoid circular import
    from gaugecool.model import LinkConfig

ComplexMatrix = np.ndarray
"""An ``(n, n)`` complex array (or a stack ``(..., n, n)`` of them)."""

MAX_EIG_DIM = 4
"""Largest matrix dimension :func:`eig` accepts."""

GAP_TOLERANCE = 1e-10
"""Relative eigenvalue gap below which a spectrum is flagged as possibly not
diagonalizable."""


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class GeneratorBasis:
    """The ``n**2 - 1`` Hermitian traceless generators of SU(n), normalized
    by ``tr(l_a l_b) = 2 delta_ab``.

    :attr:`generators` is a read-only ``(n**2 - 1, n, n)`` stack.

    """

    dim: int
    generators: np.ndarray

    def __len__(self) -> int:
        return len(self.generators)

    def __getitem__(self, a: int) -> ComplexMatrix:
        return self.generators[a]

    def combine(self, coefficients: np.ndarray) -> np.ndarray:
        """Return ``sum_a c[a, ...] * l_a``.

        *coefficients* has the generator index first; any trailing axes (the
        link index, typically) are kept in front of the matrix axes of the
        result.

        """
        return np.einsum('a...,aij->...ij', coefficients, self.generators)

    def project(self, matrices: np.ndarray) -> np.ndarray:
        """Return ``tr(l_a M)`` for a matrix or a stack of matrices, with the
        generator index first."""
        return np.einsum('aij,...ji->a...', self.generators, matrices)


@lru_cache(maxsize=None)
def generator_basis(n: int) -> GeneratorBasis:
    """Return the generators of SU(*n*).

    The basis is built recursively: the ``(n - 1)**2 - 1`` generators of
    SU(n - 1) embedded in the upper left block come first, followed by the
    symmetric and antisymmetric pair coupling each row ``j < n - 1`` to the
    last row, and the diagonal generator
    ``sqrt(2 / (n (n - 1))) diag(1, ..., 1, 1 - n)`` last. For ``n = 2`` this
    yields the Pauli matrices and for ``n = 3`` the Gell-Mann matrices.

    Raise :exc:`~gaugecool.exceptions.InvalidDimension` if ``n < 2``.

    """
    if n < 2:
        raise InvalidDimension(f'n(={n}) must be >= 2.')

    generators: List[np.ndarray] = []
    if n > 2:
        for lower in generator_basis(n - 1).generators:
            embedded = np.zeros((n, n), dtype=complex)
            embedded[:-1, :-1] = lower
            generators.append(embedded)

    last = n - 1
    for j in range(last):
        symmetric = np.zeros((n, n), dtype=complex)
        symmetric[j, last] = symmetric[last, j] = 1
        antisymmetric = np.zeros((n, n), dtype=complex)
        antisymmetric[j, last] = -1j
        antisymmetric[last, j] = 1j
        generators.extend((symmetric, antisymmetric))

    diagonal = np.ones(n)
    diagonal[last] = 1 - n
    generators.append(np.diag(np.sqrt(2 / (n * (n - 1))) * diagonal + 0j))

    return GeneratorBasis(n, _frozen(np.array(generators)))


def active_generators(basis: GeneratorBasis) -> List[int]:
    """Return the indices of generators with a non-zero diagonal.

    These are the only generators whose drift components survive once the
    links are kept diagonal by optimal cooling; there are exactly ``n - 1``
    of them.

    """
    diagonals = np.einsum('aii->ai', basis.generators)
    return [a for a, d in enumerate(diagonals) if np.any(np.abs(d) > 1e-14)]


def _require_finite(matrix: np.ndarray) -> None:
    if not np.all(np.isfinite(matrix)):
        raise InvalidInput('matrix has non-finite entries.')


def expm(matrix: ComplexMatrix) -> ComplexMatrix:
    """Return the matrix exponential of *matrix* (or of each matrix of
    a stack) by Pade scaling and squaring.

    Raise :exc:`~gaugecool.exceptions.InvalidInput` if *matrix* has
    non-finite entries.

    """
    matrix = np.asarray(matrix, dtype=complex)
    _require_finite(matrix)
    return scipy.linalg.expm(matrix)


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition ``M = Q diag(values) Q^-1`` with ``det Q = 1``.

    Eigenvalues are sorted by descending modulus, ties by ascending phase.
    :attr:`diagonalizable` is cleared when two eigenvalues are closer than
    :data:`GAP_TOLERANCE` relative to ``|M|_F``; :attr:`basis` is still the
    computed (possibly ill-conditioned) one in that case.

    """

    values: np.ndarray
    basis: ComplexMatrix
    diagonalizable: bool

    def reconstruct(self) -> ComplexMatrix:
        """Return ``Q diag(values) Q^-1``."""
        return (self.basis * self.values) @ np.linalg.inv(self.basis)


def eig(matrix: ComplexMatrix) -> Spectrum:
    """Diagonalize *matrix* (dimension at most :data:`MAX_EIG_DIM`).

    Raise :exc:`~gaugecool.exceptions.InvalidDimension` for larger or
    non-square matrices and :exc:`~gaugecool.exceptions.InvalidInput` for
    non-finite ones.

    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidDimension(
            f'expected a square matrix, got {matrix.shape}.'
        )
    n = matrix.shape[0]
    if n > MAX_EIG_DIM:
        raise InvalidDimension(f'dim(={n}) must be <= {MAX_EIG_DIM}.')
    _require_finite(matrix)

    values, vectors = np.linalg.eig(matrix)
    # Moduli are compared on a 1e-10 grid so that round-off cannot reorder
    # eigenvalues of (nearly) equal modulus.
    modulus = np.round(np.abs(values), 10)
    order = np.lexsort((np.angle(values), -modulus))
    values = values[order]
    vectors = vectors[:, order]

    # Columns are unit vectors, so the determinant only vanishes for
    # defective input, where Q is kept unscaled.
    det = np.linalg.det(vectors)
    if det != 0:
        vectors = vectors / det ** (1 / n)

    scale = np.linalg.norm(matrix)
    gaps = np.abs(values[:, None] - values[None, :])[np.triu_indices(n, 1)]
    diagonalizable = bool(np.all(gaps > GAP_TOLERANCE * max(scale, 1e-300)))

    return Spectrum(_frozen(values), _frozen(vectors), diagonalizable)


def unitarity_distance(config: 'LinkConfig') -> float:
    """Return ``delta_f = sum_k |U_k|_F**2 - N n``.

    ``delta_f`` is non-negative on the unit-determinant manifold and zero
    exactly when every link is unitary. Round-off below zero (down to
    ``-1e-9``) is clamped to ``0``.

    """
    links = config.links
    value = float(np.sum(np.abs(links) ** 2)) - links.shape[0] * links.shape[1]
    if -1e-9 <= value < 0:
        return 0.0
    return value
