"""Symmetric-matrix numerics: eigendecompositions, definiteness classes,
null spaces, and matrix exponentials.

Everything here operates on plain ``numpy`` arrays.  The helpers that reason
about the agreement subspace take the network dimensions so they can compare
a computed null space against ``span(1_n (x) I_d)``, the subspace of states
on which all nodes carry the same d-vector.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import NDArray

from .errors import (
    NegativeDurationError,
    NotEigenvectorsError,
    NotPositiveSemidefiniteError,
    NotSymmetricError,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .graphs import GraphDimensions


class Definiteness(enum.Enum):
    """Classification of a symmetric matrix by the sign of its spectrum."""

    POSITIVE_DEFINITE = "positive_definite"
    POSITIVE_SEMIDEFINITE = "positive_semidefinite"
    ZERO = "zero"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues (ascending) and matching orthonormal eigenvector columns."""

    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.float64]

    @property
    def smallest(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def largest(self) -> float:
        return float(self.eigenvalues[-1])


@dataclass(frozen=True)
class ConsensusSubspace:
    """Orthonormal basis of the agreement subspace ``span(1_n (x) I_d)``."""

    n: int
    d: int
    basis: NDArray[np.float64]


@dataclass(frozen=True)
class NullSpaceReport:
    """Numerical null space of a PSD matrix.

    ``equals_consensus`` is True exactly when the null space has dimension
    ``d`` and every agreement basis vector is annihilated within tolerance,
    i.e. the null space *is* the agreement subspace.
    """

    basis: NDArray[np.float64]
    dimension: int
    equals_consensus: bool
    threshold: float


def _symmetry_defect(matrix: NDArray[np.float64]) -> float:
    return float(np.max(np.abs(matrix - matrix.T), initial=0.0))


def _scale(matrix: NDArray[np.float64]) -> float:
    """Relative scale used for tolerance comparisons: ``max(1, max|M|)``."""
    return max(1.0, float(np.max(np.abs(matrix), initial=0.0)))


def require_symmetric(
    matrix: NDArray[np.float64], tol: float, *, what: str = "matrix"
) -> None:
    """Raise :class:`NotSymmetricError` unless ``matrix`` is square and
    symmetric within ``tol`` relative to its magnitude."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotSymmetricError(f"{what} must be square, got shape {matrix.shape}")
    defect = _symmetry_defect(matrix)
    if defect > tol * _scale(matrix):
        raise NotSymmetricError(
            f"{what} is not symmetric: max|M - M^T| = {defect:.3e}"
        )


def symmetric_eigen(
    matrix: NDArray[np.float64], tolerances: Tolerances = DEFAULT_TOLERANCES
) -> SpectrumReport:
    """Eigendecomposition of a symmetric matrix.

    The input is checked for symmetry and symmetrised as ``(M + M^T)/2``
    before calling the symmetric solver, so the result is deterministic and
    the reconstruction ``V diag(w) V^T`` reproduces the input to solver
    accuracy.
    """
    matrix = np.asarray(matrix, dtype=float)
    require_symmetric(matrix, tolerances.symmetry)
    sym = (matrix + matrix.T) / 2.0
    eigenvalues, eigenvectors = np.linalg.eigh(sym)
    return SpectrumReport(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def classify_definiteness(
    matrix: NDArray[np.float64], tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Definiteness:
    """Classify a symmetric matrix as PD, PSD, zero, or indefinite.

    The eigenvalue cutoff is ``tolerances.definiteness`` scaled by
    ``max(1, |lambda|_max)`` so classification is stable for matrices of
    moderate norm and does not flip on rounding noise.
    """
    report = symmetric_eigen(matrix, tolerances)
    eigenvalues = report.eigenvalues
    magnitude = float(np.max(np.abs(eigenvalues), initial=0.0))
    cutoff = tolerances.definiteness * max(1.0, magnitude)
    if magnitude <= cutoff:
        return Definiteness.ZERO
    smallest = float(eigenvalues[0])
    if smallest > cutoff:
        return Definiteness.POSITIVE_DEFINITE
    if smallest >= -cutoff:
        return Definiteness.POSITIVE_SEMIDEFINITE
    return Definiteness.INDEFINITE


def consensus_subspace(dims: "GraphDimensions") -> ConsensusSubspace:
    """Orthonormal basis of the agreement subspace for ``n`` nodes of
    dimension ``d``: columns of ``(1_n (x) I_d) / sqrt(n)``."""
    basis = np.kron(np.ones((dims.n, 1)), np.eye(dims.d)) / np.sqrt(dims.n)
    basis.setflags(write=False)
    return ConsensusSubspace(n=dims.n, d=dims.d, basis=basis)


def null_space_basis(
    matrix: NDArray[np.float64],
    dims: "GraphDimensions",
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> NullSpaceReport:
    """Numerical null space of a PSD matrix of size ``n*d``.

    Eigenvalues at or below ``tolerances.null_space * max(1, lambda_max)``
    count as zero; the verdict is therefore invariant under positive
    rescaling of the matrix.  Raises
    :class:`NotPositiveSemidefiniteError` if an eigenvalue is clearly
    negative and :class:`DimensionMismatchError` on a size mismatch.
    """
    from .errors import DimensionMismatchError

    matrix = np.asarray(matrix, dtype=float)
    size = dims.n * dims.d
    if matrix.shape != (size, size):
        raise DimensionMismatchError(
            f"expected a {size}x{size} matrix for n={dims.n}, d={dims.d}, "
            f"got shape {matrix.shape}"
        )
    report = symmetric_eigen(matrix, tolerances)
    eigenvalues = report.eigenvalues
    lam_max = max(float(eigenvalues[-1]), 0.0)
    scale = max(1.0, lam_max)
    if float(eigenvalues[0]) < -tolerances.psd * scale:
        raise NotPositiveSemidefiniteError(
            f"matrix has negative eigenvalue {eigenvalues[0]:.3e}"
        )
    threshold = tolerances.null_space * scale
    mask = eigenvalues <= threshold
    basis = report.eigenvectors[:, mask]
    basis = np.array(basis)
    basis.setflags(write=False)
    dimension = int(np.count_nonzero(mask))

    equals = dimension == dims.d
    if equals:
        agreement = consensus_subspace(dims).basis
        residual = float(np.max(np.abs(matrix @ agreement), initial=0.0))
        equals = residual <= threshold
    return NullSpaceReport(
        basis=basis,
        dimension=dimension,
        equals_consensus=equals,
        threshold=threshold,
    )


def matrix_exponential_symmetric(
    matrix: NDArray[np.float64],
    t: float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> NDArray[np.float64]:
    """Compute ``exp(-M t)`` for a symmetric ``M`` via eigendecomposition.

    The result is explicitly symmetrised so that downstream symmetric
    products remain symmetric to machine precision.  ``t`` must be
    non-negative.
    """
    if t < 0:
        raise NegativeDurationError(f"duration must be non-negative, got {t}")
    matrix = np.asarray(matrix, dtype=float)
    if t == 0:
        require_symmetric(matrix, tolerances.symmetry)
        return np.eye(matrix.shape[0])
    report = symmetric_eigen(matrix, tolerances)
    decay = np.exp(-report.eigenvalues * t)
    result = (report.eigenvectors * decay) @ report.eigenvectors.T
    return (result + result.T) / 2.0


def rayleigh_extremes(
    matrix: NDArray[np.float64],
    vectors: NDArray[np.float64],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[float, float]:
    """Smallest and largest Rayleigh quotients of ``matrix`` over the given
    orthonormal eigenvector columns.

    Raises :class:`NotEigenvectorsError` if the columns are not orthonormal
    eigenvectors of ``matrix`` within tolerance.
    """
    matrix = np.asarray(matrix, dtype=float)
    require_symmetric(matrix, tolerances.symmetry)
    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim != 2 or vectors.shape[0] != matrix.shape[0]:
        raise NotEigenvectorsError(
            f"vector columns of length {matrix.shape[0]} expected, "
            f"got shape {vectors.shape}"
        )
    gram_defect = float(
        np.max(np.abs(vectors.T @ vectors - np.eye(vectors.shape[1])), initial=0.0)
    )
    if gram_defect > tolerances.eigenvector_residual:
        raise NotEigenvectorsError(
            f"columns are not orthonormal: gram defect {gram_defect:.3e}"
        )
    quotients = np.einsum("ij,ij->j", vectors, matrix @ vectors)
    residual = matrix @ vectors - vectors * quotients
    worst = float(np.max(np.abs(residual), initial=0.0))
    if worst > tolerances.eigenvector_residual * _scale(matrix):
        raise NotEigenvectorsError(
            f"columns are not eigenvectors: residual {worst:.3e}"
        )
    return float(np.min(quotients)), float(np.max(quotients))
