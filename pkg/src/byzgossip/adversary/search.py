"""Linear search over attack scalings by one-round lookahead."""

from typing import Callable

import numpy as np
from loguru import logger

from ..aggregate.inbox import assemble_inbox
from ..aggregate.rules import aggregation_round
from ..errors import InvalidParameterError
from ..schema.models import AttackSpec, RuleConfig
from .directions import attack_directions
from .messages import declared_values, messages_for, target_scalings
from .view import OmniscientView

DamageMetric = Callable[[OmniscientView, np.ndarray], np.ndarray]


def honest_mse(view: OmniscientView, Y: np.ndarray) -> np.ndarray:
    """Per-row squared distance of post-round parameters to the pre-round honest mean."""
    return np.sum((Y - view.mean) ** 2, axis=1)


def search_scaling(
    view: OmniscientView,
    spec: AttackSpec,
    rule_cfg: RuleConfig,
    damage_metric: DamageMetric = honest_mse,
) -> float | np.ndarray:
    """Pick the grid value that maximizes damage after one simulated round.

    Each candidate is simulated on scratch copies; the view is never written.
    Candidates are scanned in increasing order and only a strictly larger damage
    replaces the incumbent, so ties go to the smaller value.

    Args:
        view: Omniscient snapshot
        spec: Attack with a grid ``scaling``
        rule_cfg: Rule to simulate
        damage_metric: Per-row damage; the global search maximizes its mean

    Returns:
        The winning grid value, or one value per honest row with ``per_node_search``
    """
    if not isinstance(spec.scaling, list) or not spec.scaling:
        raise InvalidParameterError("scaling search needs a non-empty grid")

    directions = attack_directions(view, spec)
    grid = sorted(set(float(c) for c in spec.scaling))
    labels = view.context.honest_labels
    topology = view.topology

    n_rows = view.X.shape[0]
    best_global, best_value = -np.inf, grid[0]
    best_rows = np.full(n_rows, -np.inf)
    best_row_values = np.full(n_rows, grid[0])

    for c in grid:
        zetas = target_scalings(spec, directions, c)
        declared = declared_values(view, spec, directions, zetas)
        inbox = assemble_inbox(view.X, topology, messages_for(view, declared))
        outcome = aggregation_round(view.X, inbox, rule_cfg, labels)
        damage = damage_metric(view, outcome.X)

        total = float(np.mean(damage)) if n_rows else 0.0
        if total > best_global:
            best_global, best_value = total, c
        improved = damage > best_rows
        best_rows[improved] = damage[improved]
        best_row_values[improved] = c

    if spec.per_node_search:
        logger.debug(f"Per-node search picked mean zeta {best_row_values.mean():.4g}")
        return best_row_values
    logger.debug(f"Search picked zeta={best_value:.4g} (damage {best_global:.4g})")
    return best_value
