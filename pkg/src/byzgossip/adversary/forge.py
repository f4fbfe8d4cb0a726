"""Turn attack directions into per-edge Byzantine messages."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from loguru import logger

from ..schema.models import AttackKind, AttackSpec, RuleConfig
from .directions import attack_directions
from .messages import declared_values, messages_for, target_scalings
from .search import search_scaling
from .view import OmniscientView


@dataclass(frozen=True)
class ForgedMessages:
    """Byzantine inbox entries keyed by ``(sender, receiver)`` plus the scaling used.

    ``zeta`` is the grid value (or fixed scaling) shared by all targets; with
    per-node search it is the mean of the per-target values.
    """

    entries: dict[tuple[int, int], np.ndarray]
    zeta: float
    zetas: np.ndarray
    direction_norms: np.ndarray = field(repr=False)


def forge_messages(
    view: OmniscientView,
    spec: AttackSpec,
    rule_cfg: RuleConfig,
    zeta: Optional[float | np.ndarray] = None,
) -> ForgedMessages:
    """Compute the Byzantine entries for one round.

    Args:
        view: Omniscient snapshot of the honest state
        spec: Attack description
        rule_cfg: Rule under attack (used by the scaling search)
        zeta: Grid value(s) to use; searched when None and ``spec.scaling`` is a grid

    Returns:
        ForgedMessages covering every Byzantine -> honest edge
    """
    directions = attack_directions(view, spec)
    if spec.kind in (AttackKind.NONE, AttackKind.TWO_WORLD):
        chosen: float | np.ndarray = 0.0 if spec.kind == AttackKind.NONE else 1.0
        zetas = np.full(view.X.shape[0], float(chosen))
    else:
        if zeta is not None:
            chosen = zeta
        elif spec.is_search:
            chosen = search_scaling(view, spec, rule_cfg)
        else:
            chosen = float(spec.scaling)  # type: ignore[arg-type]
        zetas = target_scalings(spec, directions, chosen)

    declared = declared_values(view, spec, directions, zetas)
    entries = messages_for(view, declared)
    summary = float(np.mean(chosen)) if np.ndim(chosen) else float(chosen)
    logger.debug(f"{spec.kind.value}: zeta={summary:.4g}, {len(entries)} forged entries")
    return ForgedMessages(
        entries=entries,
        zeta=summary,
        zetas=zetas,
        direction_norms=np.linalg.norm(directions, axis=1),
    )
