"""Online theorem monitor run after every aggregation step."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from loguru import logger

from ..adversary.view import HonestContext
from ..aggregate.error_term import ErrorTermReport, extract_error_term
from ..errors import TheoremViolationError
from ..metrics.bounds import bounds_for
from ..metrics.check import within
from ..metrics.robustness import mean_shift_sq, mse_to, var_h
from ..schema.models import AggregationRule, BoundSet, RuleConfig


@dataclass(frozen=True)
class StepFlags:
    monitored: bool
    ok_alpha: bool
    ok_lambda: bool
    ok_error: bool
    error: ErrorTermReport

    @property
    def ok(self) -> bool:
        return self.ok_alpha and self.ok_lambda and self.ok_error


def precondition_failure(
    rule_cfg: RuleConfig, context: HonestContext, bounds: BoundSet
) -> Optional[str]:
    """Why the one-step bounds do not apply to this run, or None when they do."""
    if rule_cfg.rule == AggregationRule.CLIPPED_GOSSIP_ORACLE:
        return "ClippedGossipOracle has no closed-form bound"
    if rule_cfg.rule == AggregationRule.NNA and rule_cfg.nna_local_step:
        return "NNA per-node step is outside the gossip-step analysis"
    max_byz = context.topology.max_byzantine_neighbors()
    if rule_cfg.rule == AggregationRule.PLAIN_GOSSIP and max_byz > 0:
        return "plain gossip with Byzantine neighbors"
    if max_byz > rule_cfg.b:
        return f"an honest node has {max_byz} Byzantine neighbors > b={rule_cfg.b}"
    if context.spectral.mu2 <= 0:
        return "honest subgraph is disconnected"
    if not bounds.feasible:
        return f"delta={bounds.delta:.4g} > 1"
    mu_max = context.spectral.mu_max
    if mu_max > 0 and rule_cfg.eta > (1.0 / mu_max) * (1.0 + 1e-12):
        return f"eta={rule_cfg.eta:.4g} > 1/mu_max(G_H)={1.0 / mu_max:.4g}"
    return None


class TheoremMonitor:
    """Checks the one-step (alpha, lambda) inequalities and the error-term bound.

    The error term is extracted on every step for the trace; inequalities are only
    asserted when the class preconditions hold.
    """

    def __init__(
        self,
        rule_cfg: RuleConfig,
        context: HonestContext,
        enabled: bool = True,
        strict: bool = False,
    ):
        self.rule_cfg = rule_cfg
        self.context = context
        self.strict = strict
        self.bounds = bounds_for(rule_cfg.rule, context.spectral, rule_cfg.b, rule_cfg.eta)
        self.reason = precondition_failure(rule_cfg, context, self.bounds)
        self.active = enabled and self.reason is None
        if enabled and self.reason is not None:
            logger.warning(f"Online monitor disabled: {self.reason}")

    def observe(self, t: int, X_before: np.ndarray, X_after: np.ndarray) -> StepFlags:
        error = extract_error_term(
            X_before, X_after, self.rule_cfg.eta, self.context.W, b=self.rule_cfg.b
        )
        if not self.active:
            return StepFlags(False, True, True, True, error)

        pre_var = var_h(X_before)
        ok_alpha = within(mse_to(X_after, X_before.mean(axis=0)), self.bounds.alpha_bound * pre_var)
        ok_lambda = within(mean_shift_sq(X_before, X_after), self.bounds.lambda_bound * pre_var)
        bound = error.bound_nna if self.rule_cfg.rule == AggregationRule.NNA else error.bound_cgplus
        if self.rule_cfg.rule == AggregationRule.PLAIN_GOSSIP:
            bound = 0.0
        ok_error = within(error.norm_sq, bound)

        flags = StepFlags(True, ok_alpha, ok_lambda, ok_error, error)
        if not flags.ok:
            message = (
                f"round {t}: bound violated (alpha={ok_alpha}, lambda={ok_lambda}, "
                f"error={ok_error}, |E|^2={error.norm_sq:.6g} vs {bound:.6g})"
            )
            if self.strict:
                raise TheoremViolationError(message)
            logger.error(message)
        return flags
