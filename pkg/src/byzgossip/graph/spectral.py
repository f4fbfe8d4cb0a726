"""Laplacian spectra: algebraic connectivity, spectral gap and Fiedler vector."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from loguru import logger

from ..config import config
from ..errors import ContractViolationError
from ..schema.models import SpectralReport


@dataclass(frozen=True)
class SpectralInfo:
    """Spectral quantities of a Laplacian.

    ``mu2`` is 0 and ``fiedler`` is the zero vector when the graph is disconnected
    (``kernel_dim > 1``) or has a single node.
    """

    mu2: float
    mu_max: float
    gamma: float
    fiedler: np.ndarray
    kernel_dim: int
    eigenvalues: np.ndarray

    @property
    def n(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def connected(self) -> bool:
        return self.kernel_dim == 1

    def to_report(self) -> SpectralReport:
        return SpectralReport(
            n=self.n,
            mu2=self.mu2,
            mu_max=self.mu_max,
            gamma=self.gamma,
            kernel_dim=self.kernel_dim,
            connected=self.connected,
            fiedler=[float(v) for v in self.fiedler],
        )


def _check_laplacian(L: np.ndarray) -> np.ndarray:
    matrix = np.asarray(L, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ContractViolationError(f"Laplacian must be square, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ContractViolationError("Laplacian has non-finite entries")
    scale = max(1.0, float(np.abs(matrix).max(initial=0.0)))
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=config.eig_tol * scale):
        raise ContractViolationError("Laplacian is not symmetric")
    return matrix


def _canonical_eigenvector(basis: np.ndarray) -> np.ndarray:
    """Deterministic unit vector of the eigenspace spanned by ``basis`` columns.

    Projects the first standard basis vector with a nonzero projection. The result
    has the lexicographically largest leading component among unit vectors of the
    space, independent of the solver's choice of basis.
    """
    if basis.shape[1] == 1:
        vector = basis[:, 0].copy()
    else:
        projector = basis @ basis.T
        vector = basis[:, 0].copy()
        for k in range(projector.shape[0]):
            column = projector[:, k]
            norm = float(np.linalg.norm(column))
            if norm > config.fiedler_tol:
                vector = column / norm
                break
    leading = np.flatnonzero(np.abs(vector) > config.fiedler_tol)
    if leading.size and vector[leading[0]] < 0:
        vector = -vector
    return vector / np.linalg.norm(vector)


def spectral_info(L: np.ndarray) -> SpectralInfo:
    """Eigen-decompose a Laplacian and extract mu2, mu_max, gamma and the Fiedler vector.

    Args:
        L: Symmetric PSD Laplacian

    Returns:
        SpectralInfo with eigenvalues sorted ascending

    Raises:
        ContractViolationError: If L is not square, finite and symmetric
    """
    matrix = _check_laplacian(L)
    n = matrix.shape[0]
    if n == 0:
        empty = np.zeros(0)
        return SpectralInfo(0.0, 0.0, 0.0, empty, 0, empty)

    eigenvalues, vectors = scipy.linalg.eigh(matrix)
    mu_max = max(float(eigenvalues[-1]), 0.0)
    tol = config.kernel_tol * max(1.0, mu_max)
    kernel_dim = int(np.sum(eigenvalues <= tol))

    if kernel_dim != 1 or n == 1:
        if kernel_dim > 1:
            logger.warning(f"Graph is disconnected ({kernel_dim} components); reporting mu2 = 0")
        return SpectralInfo(0.0, mu_max, 0.0, np.zeros(n), kernel_dim, eigenvalues)

    mu2 = float(eigenvalues[1])
    cluster = np.abs(eigenvalues - mu2) <= tol
    cluster[0] = False
    if int(cluster.sum()) > 1:
        logger.debug(f"mu2 = {mu2:.6g} has multiplicity {int(cluster.sum())}")
    fiedler = _canonical_eigenvector(vectors[:, cluster])
    gamma = mu2 / mu_max if mu_max > 0 else 0.0
    return SpectralInfo(mu2, mu_max, min(gamma, 1.0), fiedler, kernel_dim, eigenvalues)
