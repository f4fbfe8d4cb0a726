"""Attack directions. Each returns an (|H|, d) array whose row i targets honest row i."""

import numpy as np

from ..errors import InsufficientPopulationError, InvalidParameterError, UndefinedFiedlerError
from ..schema.models import AttackKind, AttackSpec
from .view import OmniscientView


def alie_direction(view: OmniscientView) -> np.ndarray:
    """Coordinate-wise population standard deviation of the honest rows."""
    n_honest = view.X.shape[0]
    if n_honest < 2:
        raise InsufficientPopulationError(f"ALIE needs at least 2 honest nodes, got {n_honest}")
    sigma = np.std(view.X, axis=0, ddof=0)
    return np.tile(sigma, (n_honest, 1))


def foe_direction(view: OmniscientView) -> np.ndarray:
    """Negated honest mean for every target."""
    return np.tile(-view.mean, (view.X.shape[0], 1))


def dissensus_direction(view: OmniscientView) -> np.ndarray:
    """Rows of ``W_H X_H``."""
    return view.W @ view.X


def sph_direction(view: OmniscientView) -> np.ndarray:
    """Rank-one Fiedler projection ``e e^T X_H``."""
    if view.context.spectral.mu2 <= 0:
        raise UndefinedFiedlerError("honest subgraph is disconnected; Fiedler vector undefined")
    e = view.fiedler
    return np.outer(e, e @ view.X)


def lookahead_direction(view: OmniscientView, s: int, eta: float | None = None) -> np.ndarray:
    """``W_H (I - eta W_H)^{2s} X_H``; s = 0 is Dissensus, large s approaches SpH."""
    if s < 0:
        raise InvalidParameterError(f"horizon must be >= 0, got {s}")
    step = view.eta if eta is None else eta
    propagator = np.eye(view.W.shape[0]) - step * view.W
    return view.W @ np.linalg.matrix_power(propagator, 2 * s) @ view.X


def block_targets(view: OmniscientView) -> np.ndarray:
    """Honest mean of each target's own block, one row per target."""
    labels = view.context.partition()
    targets = np.empty_like(view.X)
    for label in np.unique(labels):
        members = labels == label
        targets[members] = view.X[members].mean(axis=0)
    return targets


def twoworld_direction(view: OmniscientView) -> np.ndarray:
    """Offset from each target to the honest mean of its own block."""
    return block_targets(view) - view.X


def attack_directions(view: OmniscientView, spec: AttackSpec) -> np.ndarray:
    """Direction matrix for ``spec.kind`` (zeros for no attack)."""
    if spec.kind == AttackKind.NONE:
        return np.zeros_like(view.X)
    if spec.kind == AttackKind.ALIE:
        return alie_direction(view)
    if spec.kind == AttackKind.FOE:
        return foe_direction(view)
    if spec.kind == AttackKind.DISSENSUS:
        return dissensus_direction(view)
    if spec.kind == AttackKind.SPECTRAL_HETEROGENEITY:
        return sph_direction(view)
    if spec.kind == AttackKind.LOOKAHEAD:
        return lookahead_direction(view, spec.horizon)
    if spec.kind == AttackKind.TWO_WORLD:
        return twoworld_direction(view)
    raise InvalidParameterError(f"Unknown attack kind: {spec.kind}")
