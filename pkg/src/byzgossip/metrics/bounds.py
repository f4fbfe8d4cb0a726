"""Closed-form contraction and bias bounds for the robust rules."""

import math

from loguru import logger

from ..graph.spectral import SpectralInfo
from ..schema.models import AggregationRule, BoundSet


def delta_for(rule: AggregationRule, mu2: float, b: int) -> float:
    """Robustness ratio delta: ``2(b+1)/mu2`` for clipping rules, ``8b/mu2`` for NNA."""
    if rule == AggregationRule.PLAIN_GOSSIP:
        return 0.0
    load = 8.0 * b if rule == AggregationRule.NNA else 2.0 * (b + 1)
    if mu2 <= 0:
        return math.inf
    return load / mu2


def bounds_for(rule: AggregationRule, spectral: SpectralInfo, b: int, eta: float) -> BoundSet:
    """Evaluate the bound set for a rule on a concrete honest spectrum.

    ``mu_min`` is instantiated with the measured ``mu2``. ClippedGossipOracle uses the
    CG+ constants. Plain gossip has ``delta = 0`` and is only meaningful without
    Byzantine neighbors.

    Args:
        rule: Aggregation rule
        spectral: Spectrum of the honest subgraph
        b: Assumed Byzantine neighbors per node
        eta: Communication step-size

    Returns:
        BoundSet, flagged infeasible when delta > 1
    """
    mu2, mu_max = spectral.mu2, spectral.mu_max
    delta = delta_for(rule, mu2, b)
    rate = eta * mu2
    gamma = spectral.gamma

    if rule == AggregationRule.PLAIN_GOSSIP:
        alpha_bound, lambda_bound = 1.0 - rate, 0.0
    elif rule == AggregationRule.NNA:
        alpha_bound, lambda_bound = 1.0 - eta * (mu2 - 8.0 * b), 8.0 * eta * b
    else:
        alpha_bound, lambda_bound = 1.0 - eta * (mu2 - 2.0 * (b + 1)), 2.0 * eta * (b + 1)

    feasible = mu2 > 0 and delta <= 1.0
    if not feasible:
        logger.warning(f"{rule.value} bounds infeasible: delta={delta:.4g} (mu2={mu2:.4g}, b={b})")

    if mu2 > 0 and delta < 1.0 and rate > 0:
        contraction = 1.0 - rate * (1.0 - delta)
        loose = 4.0 * delta / (rate * (1.0 - delta) ** 2)
        tight = rate * delta / (1.0 - math.sqrt(max(contraction, 0.0))) ** 2
        multistep = 4.0 * delta / (gamma * (1.0 - delta) ** 2) if gamma > 0 else math.inf
    else:
        loose = tight = multistep = math.inf

    return BoundSet(
        rule=rule,
        mu2=mu2,
        mu_max=mu_max,
        b=b,
        eta=eta,
        alpha_bound=alpha_bound,
        lambda_bound=lambda_bound,
        delta=delta,
        gamma=gamma,
        rate=rate,
        feasible=feasible,
        asymptotic_bias_factor=loose,
        tight_bias_factor=tight,
        reduction_alpha_multistep=0.0,
        reduction_lambda_multistep=multistep,
    )
