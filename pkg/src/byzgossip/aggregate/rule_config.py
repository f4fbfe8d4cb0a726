"""Build rule configurations consistent with a topology."""

from typing import Optional

from loguru import logger

from ..errors import ConfigError
from ..graph.spectral import spectral_info
from ..graph.topology import Topology, laplacian
from ..schema.models import AggregationRule, RuleConfig


def build_rule_config(
    rule: AggregationRule,
    b: int,
    topology: Topology,
    eta: Optional[float] = None,
    allow_large_eta: bool = False,
    nna_local_step: bool = False,
) -> RuleConfig:
    """Create a RuleConfig, defaulting eta to ``1/mu_max(G)`` of the full graph.

    Args:
        rule: Aggregation rule
        b: Assumed Byzantine neighbors per node
        topology: Full topology (Byzantine nodes included)
        eta: Explicit step-size, checked against ``1/mu_max(G)``
        allow_large_eta: Accept eta above ``1/mu_max(G)``
        nna_local_step: NNA only, use the per-node step

    Raises:
        ConfigError: On eta above the bound, b < 0, or an oracle rule with b = 0
    """
    if b < 0:
        raise ConfigError(f"b must be >= 0, got {b}")
    if rule == AggregationRule.CLIPPED_GOSSIP_ORACLE and b < 1:
        raise ConfigError("ClippedGossipOracle needs b >= 1")

    mu_max = spectral_info(laplacian(topology)).mu_max
    eta_max = 1.0 / mu_max if mu_max > 0 else 1.0
    if eta is None:
        eta = eta_max
    elif eta <= 0:
        raise ConfigError(f"eta must be > 0, got {eta}")
    elif eta > eta_max * (1.0 + 1e-12):
        if not allow_large_eta:
            raise ConfigError(f"eta={eta:.6g} exceeds 1/mu_max(G)={eta_max:.6g}")
        logger.warning(f"eta={eta:.6g} exceeds 1/mu_max(G)={eta_max:.6g}; bounds may not hold")

    return RuleConfig(
        rule=rule,
        b=b,
        eta=eta,
        nna_local_step=nna_local_step,
        allow_large_eta=allow_large_eta,
    )
