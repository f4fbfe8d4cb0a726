"""Offline theorem checks over a finished run trace."""

from typing import TYPE_CHECKING, Optional

from loguru import logger

from ..config import config
from ..schema.models import BoundSet, RoundCheck, RunMode, ViolationReport

if TYPE_CHECKING:
    from ..engine.trace import RunTrace

CHECK_NAMES = ("alpha", "lambda", "chained_variance", "cumulative_bias", "asymptotic_bias")


def within(value: float, bound: float, slack: Optional[float] = None) -> bool:
    """``value <= bound + slack``, with the slack scaled up for bounds above 1."""
    slack = config.bound_slack if slack is None else slack
    return value <= bound + slack * max(1.0, abs(bound))


def check_run(
    trace: "RunTrace",
    bounds: BoundSet,
    precondition_failure: Optional[str] = None,
) -> ViolationReport:
    """Evaluate every per-round inequality of a trace against a bound set.

    One-step checks compare each round's post-aggregation MSE and mean shift with
    its pre-aggregation variance. Chained and bias checks apply to mean-estimation
    runs only; in D-SGD runs gradient steps move the state between aggregations.

    Args:
        trace: Completed run trace
        bounds: Bounds for the run's rule and honest spectrum
        precondition_failure: Reason the class preconditions fail, if known

    Returns:
        ViolationReport; ``checked`` is False when preconditions fail
    """
    reason = precondition_failure
    if reason is None and not bounds.feasible:
        reason = f"delta={bounds.delta:.4g} > 1 for {bounds.rule.value}"
    if reason is not None:
        logger.warning(f"Skipping theorem checks: {reason}")
        return ViolationReport(checked=False, note=f"preconditions fail: {reason}")

    rows = trace.rows
    var0 = rows[0].var_h if rows else 0.0
    chained = trace.header.mode == RunMode.MEAN_ESTIMATION
    counts = dict.fromkeys(CHECK_NAMES, 0)
    checks = []

    for row in rows[1:]:
        t = row.round
        alpha_ok = within(row.mse, bounds.alpha_bound * row.pre_var)
        lambda_ok = within(row.mean_shift_sq, bounds.lambda_bound * row.pre_var)
        if chained:
            chained_ok = within(row.var_h, bounds.chained_variance(t, var0))
            bias_ok = within(row.bias, bounds.cumulative_bias(t, var0))
            asymptotic_ok = within(row.bias**2, bounds.asymptotic_bias_bound(var0))
        else:
            chained_ok = bias_ok = asymptotic_ok = True

        outcome = RoundCheck(
            round=t,
            alpha_ok=alpha_ok,
            lambda_ok=lambda_ok,
            chained_variance_ok=chained_ok,
            cumulative_bias_ok=bias_ok,
            asymptotic_bias_ok=asymptotic_ok,
        )
        for name, ok in zip(CHECK_NAMES, (alpha_ok, lambda_ok, chained_ok, bias_ok, asymptotic_ok)):
            if not ok:
                counts[name] += 1
        checks.append(outcome)

    report = ViolationReport(checked=True, rounds=checks, counts=counts)
    if report.total:
        logger.warning(f"{report.total} bound violations: {counts}")
    return report
