"""Omniscient colluding adversary: attack directions, forging and scaling search."""

from .directions import (
    alie_direction,
    attack_directions,
    block_targets,
    dissensus_direction,
    foe_direction,
    lookahead_direction,
    sph_direction,
    twoworld_direction,
)
from .forge import ForgedMessages, forge_messages
from .messages import declared_values, messages_for, target_scalings
from .search import honest_mse, search_scaling
from .view import HonestContext, OmniscientView

__all__ = [
    "ForgedMessages",
    "HonestContext",
    "OmniscientView",
    "alie_direction",
    "attack_directions",
    "block_targets",
    "declared_values",
    "dissensus_direction",
    "foe_direction",
    "forge_messages",
    "honest_mse",
    "lookahead_direction",
    "messages_for",
    "search_scaling",
    "sph_direction",
    "target_scalings",
    "twoworld_direction",
]
