"""Pytest fixtures for testing."""

import numpy as np
import pytest

from byzgossip.graph.generators import (
    complete_graph,
    path_graph,
    three_clique_ghb,
    two_clique_bridge,
    with_byzantine,
)
from byzgossip.schema.models import AggregationRule, RuleConfig


@pytest.fixture
def p3():
    """Honest path 0 - 1 - 2."""
    return path_graph(3)


@pytest.fixture
def p3_byzantine_end():
    """Path 0 - 1 - 2 with node 2 Byzantine."""
    return with_byzantine(path_graph(3), [2])


@pytest.fixture
def k4():
    """Complete graph on four honest nodes."""
    return complete_graph(4)


@pytest.fixture
def bridge_4_2():
    """Two 4-cliques with two cross-links per node (mu2 = 4)."""
    return two_clique_bridge(4, 2)


@pytest.fixture
def ghb_4_2():
    """Three 4-cliques, the third Byzantine; every honest node has 2 Byzantine neighbors."""
    return three_clique_ghb(4, 2)


@pytest.fixture
def rng():
    """Seeded generator for test data."""
    return np.random.default_rng(0)


@pytest.fixture
def cgplus_cfg():
    """CG+ with b=1 and a unit step."""
    return RuleConfig(rule=AggregationRule.CG_PLUS, b=1, eta=1.0)


@pytest.fixture
def tmp_out(tmp_path):
    """Output directory for run artifacts."""
    out = tmp_path / "runs"
    out.mkdir()
    return out
