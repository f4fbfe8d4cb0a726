"""Honest-population statistics and the measured robustness ratio."""

import numpy as np

from ..errors import ContractViolationError, UndefinedRatioError


def _rows(X: np.ndarray) -> np.ndarray:
    matrix = np.asarray(X, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise ContractViolationError(f"need a non-empty ParamMatrix, got shape {matrix.shape}")
    return matrix


def var_h(X: np.ndarray) -> float:
    """Average squared distance of honest rows to their mean."""
    matrix = _rows(X)
    return float(np.mean(np.sum((matrix - matrix.mean(axis=0)) ** 2, axis=1)))


def var_h_projector(X: np.ndarray) -> float:
    """``||(I - P_1) X||_F^2 / |H|`` with ``P_1`` the projector onto constants."""
    matrix = _rows(X)
    n = matrix.shape[0]
    projector = np.eye(n) - np.full((n, n), 1.0 / n)
    return float(np.sum((projector @ matrix) ** 2) / n)


def mse_to(X: np.ndarray, center: np.ndarray) -> float:
    """Average squared distance of rows to ``center``."""
    return float(np.mean(np.sum((_rows(X) - center) ** 2, axis=1)))


def mean_shift_sq(X_before: np.ndarray, X_after: np.ndarray) -> float:
    """Squared distance between the honest means."""
    return float(np.sum((_rows(X_after).mean(axis=0) - _rows(X_before).mean(axis=0)) ** 2))


def alpha_measured(X_before: np.ndarray, X_after: np.ndarray) -> float:
    """Ratio of the post-step MSE to the pre-step honest mean over the pre-step variance.

    Raises:
        UndefinedRatioError: If the pre-step variance is zero
    """
    before = _rows(X_before)
    variance = var_h(before)
    if variance == 0.0:
        raise UndefinedRatioError("alpha is undefined for a state with zero honest variance")
    return mse_to(X_after, before.mean(axis=0)) / variance
