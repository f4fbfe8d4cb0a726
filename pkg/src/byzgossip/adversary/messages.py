"""Per-target scalings, declared vectors and their delivery over Byzantine edges."""

import numpy as np

from ..config import config
from ..schema.models import AttackKind, AttackSpec
from .directions import block_targets
from .view import OmniscientView


def target_scalings(spec: AttackSpec, directions: np.ndarray, c: float | np.ndarray) -> np.ndarray:
    """Per-target zeta for grid value(s) c.

    Grid values are divided by ``max(||a_i||, eps)`` when ``spec.normalize`` is set;
    fixed scalings are used as given.
    """
    values = np.broadcast_to(np.asarray(c, dtype=np.float64), (directions.shape[0],))
    if spec.is_search and spec.normalize:
        norms = np.linalg.norm(directions, axis=1)
        return values / np.maximum(norms, config.zeta_eps)
    return values.copy()


def declared_values(
    view: OmniscientView, spec: AttackSpec, directions: np.ndarray, zetas: np.ndarray
) -> np.ndarray:
    """Vector declared to each honest target (one row per target)."""
    if spec.kind == AttackKind.NONE:
        return np.array(view.X, copy=True)
    if spec.kind == AttackKind.TWO_WORLD:
        return block_targets(view)
    if spec.centered_on_target:
        return view.X + zetas[:, None] * directions
    return view.mean[None, :] + zetas[:, None] * directions


def messages_for(view: OmniscientView, declared: np.ndarray) -> dict[tuple[int, int], np.ndarray]:
    """Colluding delivery: every Byzantine neighbor of target i sends ``declared[i]``."""
    context = view.context
    entries: dict[tuple[int, int], np.ndarray] = {}
    for receiver, row in context.row_of.items():
        for sender in context.topology.byzantine_neighbors(receiver):
            entries[(sender, receiver)] = declared[row]
    return entries
