"""Gossip-error decomposition ``X+ = (I - eta W_H) X + eta E``."""

from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolationError, InvalidParameterError
from ..schema.models import ErrorTermSummary


@dataclass(frozen=True)
class ErrorTermReport:
    E: np.ndarray
    norm_sq: float
    bound_cgplus: float
    bound_nna: float
    pairwise_energy: float

    def to_summary(self) -> ErrorTermSummary:
        return ErrorTermSummary(
            norm_sq=self.norm_sq,
            pairwise_energy=self.pairwise_energy,
            bound_cgplus=self.bound_cgplus,
            bound_nna=self.bound_nna,
        )


def pairwise_energy_quadratic(X: np.ndarray, W: np.ndarray) -> float:
    """``trace(X^T W X)``, the squared W-seminorm."""
    return float(np.einsum("id,ij,jd->", X, W, X))


def pairwise_energy_pairs(X: np.ndarray, W: np.ndarray) -> float:
    """Sum of ``||x_i - x_j||^2`` over edges (each unordered pair once)."""
    rows, cols = np.nonzero(np.triu(W < 0, k=1))
    if rows.size == 0:
        return 0.0
    weights = -W[rows, cols]
    return float(np.sum(weights * np.sum((X[rows] - X[cols]) ** 2, axis=1)))


def extract_error_term(
    X_before: np.ndarray,
    X_after: np.ndarray,
    eta: float,
    W_honest: np.ndarray,
    b: int = 0,
) -> ErrorTermReport:
    """Recover E from one round and evaluate the clipping-error bounds.

    Args:
        X_before: Honest parameters before the round
        X_after: Honest parameters after the round
        eta: Communication step-size used by the round
        W_honest: Laplacian of the honest subgraph
        b: Assumed Byzantine neighbors per node

    Returns:
        ErrorTermReport with ``bound_cgplus = 2(b+1)||X||^2_W`` and ``bound_nna = 8b||X||^2_W``
    """
    if eta <= 0:
        raise InvalidParameterError(f"eta must be > 0, got {eta}")
    if X_before.shape != X_after.shape or W_honest.shape != (X_before.shape[0],) * 2:
        raise ContractViolationError(
            f"inconsistent shapes: X {X_before.shape} -> {X_after.shape}, W {W_honest.shape}"
        )
    gossip = X_before - eta * (W_honest @ X_before)
    E = (X_after - gossip) / eta
    energy = pairwise_energy_pairs(X_before, W_honest)
    return ErrorTermReport(
        E=E,
        norm_sq=float(np.sum(E**2)),
        bound_cgplus=2.0 * (b + 1) * energy,
        bound_nna=8.0 * b * energy,
        pairwise_energy=energy,
    )
