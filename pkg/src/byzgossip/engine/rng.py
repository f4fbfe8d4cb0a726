"""Counter-based random streams scoped by (purpose, node, round)."""

from enum import IntEnum

import numpy as np


class Purpose(IntEnum):
    TASK_DATA = 0
    INIT = 1
    GRADIENT_NOISE = 2


def stream(root_seed: int, purpose: Purpose, node: int = 0, round: int = 0) -> np.random.Generator:
    """Independent generator for one (purpose, node, round) triple.

    Streams are derived from the root seed by ``SeedSequence`` spawn keys, so drawing
    from one stream never shifts another.
    """
    sequence = np.random.SeedSequence(root_seed, spawn_key=(int(purpose), node, round))
    return np.random.Generator(np.random.PCG64(sequence))
