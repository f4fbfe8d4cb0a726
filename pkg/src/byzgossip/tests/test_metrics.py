"""Tests for robustness statistics and closed-form bounds."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from byzgossip.aggregate import build_rule_config
from byzgossip.engine import RunConfig, simulate
from byzgossip.errors import ContractViolationError, UndefinedRatioError
from byzgossip.graph import complete_graph, honest_subgraph, laplacian, spectral_info
from byzgossip.metrics import (
    CHECK_NAMES,
    alpha_measured,
    bounds_for,
    check_run,
    delta_for,
    mean_shift_sq,
    mse_to,
    var_h,
    var_h_projector,
    within,
)
from byzgossip.schema.models import AggregationRule


@given(
    arrays(
        np.float64,
        st.tuples(st.integers(1, 8), st.integers(1, 4)),
        elements=st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False),
    )
)
def test_var_h_matches_projector_form(X):
    """Test the two variance formulas agree."""
    assert var_h(X) == pytest.approx(var_h_projector(X), rel=1e-9, abs=1e-6)


def test_var_h_values():
    """Test a hand-computed variance."""
    X = np.array([[0.0], [1.0], [2.0]])
    assert var_h(X) == pytest.approx(2.0 / 3.0)
    assert var_h(np.ones((4, 2))) == 0.0


def test_var_h_rejects_empty():
    """Test the non-empty precondition."""
    with pytest.raises(ContractViolationError):
        var_h(np.zeros((0, 2)))


def test_mse_and_mean_shift():
    """Test MSE to a point and the squared mean shift."""
    before = np.array([[0.0, 0.0], [2.0, 0.0]])
    after = np.array([[1.0, 1.0], [1.0, 1.0]])
    assert mse_to(after, before.mean(axis=0)) == pytest.approx(1.0)
    assert mean_shift_sq(before, after) == pytest.approx(1.0)


def test_alpha_measured():
    """Test the measured ratio and its zero-variance guard."""
    before = np.array([[0.0], [2.0]])
    after = np.array([[0.5], [1.5]])
    assert alpha_measured(before, after) == pytest.approx(0.25)
    with pytest.raises(UndefinedRatioError):
        alpha_measured(np.ones((3, 1)), np.ones((3, 1)))


@pytest.mark.parametrize(
    "rule,b,expected",
    [
        (AggregationRule.CG_PLUS, 1, 1.0),
        (AggregationRule.CLIPPED_GOSSIP_ORACLE, 3, 2.0),
        (AggregationRule.NNA, 1, 2.0),
        (AggregationRule.PLAIN_GOSSIP, 5, 0.0),
    ],
)
def test_delta_for(rule, b, expected):
    """Test delta = 2(b+1)/mu2 and 8b/mu2."""
    assert delta_for(rule, 4.0, b) == pytest.approx(expected)


def test_delta_infinite_without_connectivity():
    """Test delta on a disconnected honest graph."""
    assert delta_for(AggregationRule.CG_PLUS, 0.0, 1) == math.inf


def test_cgplus_bounds_on_complete_graph():
    """Test the CG+ bound set on K_26 with b = 2."""
    spectral = spectral_info(laplacian(complete_graph(26)))
    bounds = bounds_for(AggregationRule.CG_PLUS, spectral, 2, 1.0 / 26.0)
    assert bounds.feasible
    assert bounds.delta == pytest.approx(6.0 / 26.0)
    assert bounds.rate == pytest.approx(1.0)
    assert bounds.alpha_bound == pytest.approx(6.0 / 26.0)
    assert bounds.lambda_bound == pytest.approx(6.0 / 26.0)
    contraction = 1.0 - (1.0 - 6.0 / 26.0)
    assert bounds.chained_variance(3, 2.0) == pytest.approx(contraction**3 * 2.0)
    assert bounds.cumulative_bias(0, 1.0) == 0.0
    assert bounds.asymptotic_bias_factor >= bounds.tight_bias_factor > 0.0


def test_nna_bounds_infeasible_when_delta_exceeds_one(ghb_4_2):
    """Test that NNA on mu2 = 4 with b = 2 has no guarantee."""
    honest, _ = honest_subgraph(ghb_4_2)
    bounds = bounds_for(AggregationRule.NNA, spectral_info(laplacian(honest)), 2, 0.1)
    assert bounds.delta == pytest.approx(4.0)
    assert not bounds.feasible
    assert bounds.asymptotic_bias_factor == math.inf


def test_plain_gossip_bounds(p3):
    """Test plain gossip: alpha = 1 - eta mu2, no drift."""
    bounds = bounds_for(AggregationRule.PLAIN_GOSSIP, spectral_info(laplacian(p3)), 0, 1.0 / 3.0)
    assert bounds.alpha_bound == pytest.approx(2.0 / 3.0)
    assert bounds.lambda_bound == 0.0
    assert bounds.chained_variance(2, 1.0) == pytest.approx((2.0 / 3.0) ** 2)


def test_within_slack():
    """Test absolute slack below 1 and relative slack above."""
    assert within(1.0, 1.0)
    assert within(1.0 + 1e-10, 1.0, slack=1e-9)
    assert not within(1.0 + 1e-8, 1.0, slack=1e-9)
    assert within(1000.0 + 1e-7, 1000.0, slack=1e-9)
    assert not within(1000.0 + 1e-5, 1000.0, slack=1e-9)
    assert within(1.0, math.inf)


def _p3_trace(p3, T=3):
    rule_cfg = build_rule_config(AggregationRule.PLAIN_GOSSIP, 0, p3)
    trace = simulate(RunConfig(topology=p3, rule_cfg=rule_cfg, T=T, monitor=False))
    bounds = bounds_for(AggregationRule.PLAIN_GOSSIP, spectral_info(laplacian(p3)), 0, rule_cfg.eta)
    return trace, bounds


def test_check_run_clean_gossip(p3):
    """Test that unattacked gossip meets every bound."""
    trace, bounds = _p3_trace(p3)
    report = check_run(trace, bounds)
    assert report.checked
    assert report.total == 0
    assert len(report.rounds) == 3
    assert set(report.counts) == set(CHECK_NAMES)


def test_check_run_counts_violations(p3):
    """Test that a bound set that is too tight is flagged every round."""
    trace, bounds = _p3_trace(p3)
    report = check_run(trace, bounds.model_copy(update={"alpha_bound": 0.0}))
    assert report.counts["alpha"] == 3
    assert not report.rounds[0].alpha_ok
    assert report.rounds[0].lambda_ok


def test_check_run_skips_failed_preconditions(p3):
    """Test infeasible bounds and an explicit precondition failure."""
    trace, bounds = _p3_trace(p3)
    infeasible = check_run(trace, bounds.model_copy(update={"feasible": False}))
    assert not infeasible.checked
    assert "preconditions fail" in infeasible.note
    named = check_run(trace, bounds, precondition_failure="max_byz 3 > b 2")
    assert not named.checked
    assert "max_byz 3 > b 2" in named.note
