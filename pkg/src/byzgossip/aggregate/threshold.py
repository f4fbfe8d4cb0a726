"""Radial clipping and order-statistic thresholds."""

import numpy as np

from ..errors import InvalidParameterError


def clip(v: np.ndarray, tau: float) -> np.ndarray:
    """Radial clipping: v if ||v|| <= tau, else v * tau / ||v||.

    Raises:
        InvalidParameterError: If tau < 0
    """
    if tau < 0:
        raise InvalidParameterError(f"clipping radius must be >= 0, got {tau}")
    vector = np.asarray(v, dtype=np.float64)
    norm = float(np.linalg.norm(vector))
    if norm <= tau:
        return vector.copy()
    return vector * (tau / norm)


def clip_rows(diffs: np.ndarray, tau: float) -> tuple[np.ndarray, int]:
    """Clip every row of a (k, d) array to radius tau.

    Returns:
        Tuple of (clipped rows, number of rows that were shortened)
    """
    norms = np.linalg.norm(diffs, axis=1)
    over = norms > tau
    scale = np.ones_like(norms)
    scale[over] = tau / norms[over]
    return diffs * scale[:, None], int(over.sum())


def cgplus_threshold(distances: np.ndarray | list[float], b: int) -> float:
    """The (b+1)-th largest distance, or 0 when b+1 exceeds the neighbor count.

    Uses ``np.partition`` (introselect), linear on average.

    Args:
        distances: Non-negative distances to the declared neighbor values
        b: Assumed Byzantine neighbor count

    Returns:
        Clipping radius tau
    """
    values = np.asarray(distances, dtype=np.float64).ravel()
    if values.size == 0:
        raise InvalidParameterError("cgplus_threshold needs at least one distance")
    if np.any(values < 0):
        raise InvalidParameterError("distances must be non-negative")
    if b < 0:
        raise InvalidParameterError(f"b must be >= 0, got {b}")
    k = values.size
    if b + 1 > k:
        return 0.0
    index = k - b - 1
    return float(np.partition(values, index)[index])


def clipping_err(values: np.ndarray | list[float], k: int, b: int) -> float:
    """Clipping error ``err(k) = sum_{i<=k} (a_i - a_k) + b * a_k``.

    ``a`` is ``values`` sorted ascending and k is 1-based. For every k <= b+1 the
    result is at most the sum of the b+1 smallest values. The same inequality does
    not hold for descending order: ``[1, 0, 0]`` with b=2, k=1 gives 2 > 1.
    """
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    if np.any(ordered < 0):
        raise InvalidParameterError("values must be non-negative")
    if not 1 <= k <= ordered.size:
        raise InvalidParameterError(f"k must be in [1, {ordered.size}], got {k}")
    a_k = ordered[k - 1]
    return float(np.sum(ordered[:k] - a_k) + b * a_k)
