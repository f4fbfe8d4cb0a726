"""Tests for clipping, thresholds, aggregation rounds and the error term."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from byzgossip.aggregate import (
    aggregation_round,
    assemble_inbox,
    build_rule_config,
    cgplus_round,
    cgplus_threshold,
    clip,
    clip_rows,
    clipping_err,
    clippedgossip_oracle_round,
    extract_error_term,
    nna_round,
    pairwise_energy_pairs,
    pairwise_energy_quadratic,
    plain_gossip_round,
)
from byzgossip.errors import ConfigError, InvalidParameterError, ProtocolViolationError
from byzgossip.graph import Topology, honest_subgraph, laplacian, path_graph
from byzgossip.schema.models import AggregationRule, RuleConfig

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
non_negative = st.floats(min_value=0.0, max_value=1e3, allow_nan=False, allow_infinity=False)


def test_clip_inside_radius():
    """Test that vectors inside the radius are unchanged."""
    assert clip(np.array([3.0, 4.0]), 10.0) == pytest.approx([3.0, 4.0])


def test_clip_scales_to_radius():
    """Test that long vectors are scaled onto the sphere."""
    assert clip(np.array([3.0, 4.0]), 2.5) == pytest.approx([1.5, 2.0])
    assert clip(np.array([3.0, 4.0]), 0.0) == pytest.approx([0.0, 0.0])
    assert clip(np.zeros(3), 0.0) == pytest.approx([0.0, 0.0, 0.0])


def test_clip_negative_radius():
    """Test that a negative radius is refused."""
    with pytest.raises(InvalidParameterError):
        clip(np.ones(2), -1.0)


def test_clip_rows_counts_shortened():
    """Test row clipping and the clipped count."""
    rows, count = clip_rows(np.array([[3.0, 4.0], [0.3, 0.4], [0.0, 0.0]]), 1.0)
    assert count == 1
    assert rows[0] == pytest.approx([0.6, 0.8])
    assert rows[1] == pytest.approx([0.3, 0.4])


@pytest.mark.parametrize("b,expected", [(0, 5.0), (1, 4.0), (2, 3.0), (3, 1.0), (4, 0.0)])
def test_cgplus_threshold(b, expected):
    """Test the (b+1)-th largest distance."""
    assert cgplus_threshold([5.0, 3.0, 1.0, 4.0], b) == expected


def test_cgplus_threshold_errors():
    """Test empty, negative and bad-b inputs."""
    with pytest.raises(InvalidParameterError):
        cgplus_threshold([], 0)
    with pytest.raises(InvalidParameterError):
        cgplus_threshold([1.0, -1.0], 0)
    with pytest.raises(InvalidParameterError):
        cgplus_threshold([1.0], -1)


@given(st.lists(non_negative, min_size=1, max_size=30), st.integers(min_value=0, max_value=35))
def test_cgplus_threshold_matches_sort(distances, b):
    """Test the selection against a full sort."""
    expected = sorted(distances, reverse=True)[b] if b < len(distances) else 0.0
    assert cgplus_threshold(distances, b) == expected


@given(arrays(np.float64, st.integers(1, 6), elements=finite), non_negative)
def test_clip_never_exceeds_radius(v, tau):
    """Test ||clip(v, tau)|| <= tau and direction preservation."""
    clipped = clip(v, tau)
    assert np.linalg.norm(clipped) <= tau * (1 + 1e-12) + 1e-12
    assert float(np.dot(clipped, v)) >= -1e-9


@given(
    st.lists(non_negative, min_size=2, max_size=20),
    st.integers(min_value=0, max_value=8),
)
def test_clipping_err_bounded_by_smallest_sum(values, b):
    """Test err(k) <= sum of the b+1 smallest values for every k <= b+1."""
    if len(values) < b + 1:
        b = len(values) - 1
    bound = float(np.sum(np.sort(values)[: b + 1]))
    for k in range(1, b + 2):
        assert clipping_err(values, k, b) <= bound * (1 + 1e-12) + 1e-9


def test_clipping_err_value():
    """Test one hand-computed value."""
    # ascending (1, 2, 4); k=2: (1-2) + (2-2) + 3*2 = 5
    assert clipping_err([4.0, 1.0, 2.0], 2, 3) == pytest.approx(5.0)
    with pytest.raises(InvalidParameterError):
        clipping_err([1.0, 2.0], 3, 1)


def test_clipping_err_ignores_input_order():
    """Test that the descending-order counterexample is evaluated ascending."""
    # descending (1, 0, 0) with k=1 would give 0 + 2 * 1 = 2 > 1
    # ascending (0, 0, 1): k=3 gives (0-1) + (0-1) + 0 + 2 * 1 = 0
    assert [clipping_err([1.0, 0.0, 0.0], k, 2) for k in (1, 2, 3)] == [0.0, 0.0, 0.0]


def test_plain_gossip_on_p3(p3):
    """Test one gossip round on the path with eta = 1/3."""
    X = np.array([[0.0], [1.0], [2.0]])
    inbox = assemble_inbox(X, p3, {})
    Y = plain_gossip_round(X, inbox, 1.0 / 3.0)
    assert Y.ravel() == pytest.approx([1.0 / 3.0, 1.0, 5.0 / 3.0])
    assert X.ravel() == pytest.approx([0.0, 1.0, 2.0])


@pytest.mark.parametrize("rule", [AggregationRule.CG_PLUS, AggregationRule.NNA])
def test_robust_rules_reduce_to_gossip_without_b(p3, rule):
    """Test that b = 0 makes CG+ and NNA equal to plain gossip."""
    X = np.array([[0.0], [1.0], [2.0]])
    inbox = assemble_inbox(X, p3, {})
    cfg = RuleConfig(rule=rule, b=0, eta=1.0 / 3.0)
    outcome = aggregation_round(X, inbox, cfg)
    assert outcome.X.ravel() == pytest.approx([1.0 / 3.0, 1.0, 5.0 / 3.0])
    assert outcome.clipped == 0


def test_cgplus_clips_outlier(p3_byzantine_end):
    """Test that CG+ neutralizes a far Byzantine value on the path."""
    X = np.array([[0.0], [1.0]])
    inbox = assemble_inbox(X, p3_byzantine_end, {(2, 1): np.array([100.0])})
    cfg = RuleConfig(rule=AggregationRule.CG_PLUS, b=1, eta=0.5)
    outcome = aggregation_round(X, inbox, cfg)
    # node 1: tau = 1 from the honest neighbor; the clipped outlier cancels it
    assert outcome.X.ravel() == pytest.approx([0.0, 1.0])
    assert outcome.thresholds == pytest.approx([0.0, 1.0])
    assert outcome.clipped == 2
    assert cgplus_round(X, inbox, cfg) == pytest.approx(outcome.X)


def test_nna_keeps_nearest():
    """Test that NNA with b = 2 drops the two furthest neighbors."""
    star = Topology(n=4, edges=[(0, 1), (0, 2), (0, 3)])
    X = np.array([[0.0], [5.0], [4.0], [1.0]])
    inbox = assemble_inbox(X, star, {})
    cfg = RuleConfig(rule=AggregationRule.NNA, b=2, eta=0.25)
    outcome = aggregation_round(X, inbox, cfg)
    assert outcome.X[0, 0] == pytest.approx(0.25)
    assert outcome.thresholds[0] == pytest.approx(1.0)
    # leaves have a single neighbor, which is dropped
    assert outcome.X[1:].ravel() == pytest.approx([5.0, 4.0, 1.0])
    assert outcome.clipped == 2 + 3


def test_nna_ties_drop_lower_sender_first():
    """Test the deterministic tie-break at the cut."""
    star = Topology(n=3, edges=[(0, 1), (0, 2)])
    X = np.array([[0.0], [1.0], [-1.0]])
    inbox = assemble_inbox(X, star, {})
    Y = nna_round(X, inbox, RuleConfig(rule=AggregationRule.NNA, b=1, eta=0.5))
    # equal distances: sender 1 is dropped, sender 2 kept
    assert Y[0, 0] == pytest.approx(-0.5)


def test_nna_local_step():
    """Test the per-node step 1/(|n(i)| - b + 1)."""
    star = Topology(n=4, edges=[(0, 1), (0, 2), (0, 3)])
    X = np.array([[0.0], [5.0], [4.0], [1.0]])
    inbox = assemble_inbox(X, star, {})
    cfg = RuleConfig(rule=AggregationRule.NNA, b=1, eta=0.25, nna_local_step=True)
    assert nna_round(X, inbox, cfg)[0, 0] == pytest.approx((4.0 + 1.0) / 3.0)


def test_oracle_threshold_on_two_nodes():
    """Test tau = sqrt(energy / ((|H| - b) b)) on a 2-node path."""
    edge = path_graph(2)
    X = np.array([[0.0], [3.0]])
    inbox = assemble_inbox(X, edge, {})
    cfg = RuleConfig(rule=AggregationRule.CLIPPED_GOSSIP_ORACLE, b=1, eta=0.5)
    outcome = aggregation_round(X, inbox, cfg, honest_labels=frozenset({0, 1}))
    assert outcome.thresholds == pytest.approx([3.0, 3.0])
    assert outcome.X.ravel() == pytest.approx([1.5, 1.5])
    assert clippedgossip_oracle_round(X, inbox, cfg, frozenset({0, 1})) == pytest.approx(
        outcome.X
    )


def test_oracle_rejects_bad_population():
    """Test the oracle's b >= 1 and |H| > b preconditions."""
    edge = path_graph(2)
    X = np.array([[0.0], [3.0]])
    inbox = assemble_inbox(X, edge, {})
    with pytest.raises(InvalidParameterError):
        clippedgossip_oracle_round(
            X, inbox, RuleConfig(rule=AggregationRule.CLIPPED_GOSSIP_ORACLE, b=0, eta=0.5), {0, 1}
        )
    with pytest.raises(InvalidParameterError):
        clippedgossip_oracle_round(
            X, inbox, RuleConfig(rule=AggregationRule.CLIPPED_GOSSIP_ORACLE, b=2, eta=0.5), {0, 1}
        )
    with pytest.raises(InvalidParameterError):
        aggregation_round(
            X, inbox, RuleConfig(rule=AggregationRule.CLIPPED_GOSSIP_ORACLE, b=1, eta=0.5)
        )


def test_inbox_missing_forged_entry(p3_byzantine_end):
    """Test that a Byzantine edge without a message is a protocol violation."""
    with pytest.raises(ProtocolViolationError):
        assemble_inbox(np.zeros((2, 1)), p3_byzantine_end, {})


def test_inbox_rejects_forged_non_edge(p3_byzantine_end):
    """Test forged entries on non-edges and from honest senders."""
    forged = {(2, 1): np.zeros(1), (2, 0): np.zeros(1)}
    with pytest.raises(ProtocolViolationError):
        assemble_inbox(np.zeros((2, 1)), p3_byzantine_end, forged)
    with pytest.raises(ProtocolViolationError):
        assemble_inbox(np.zeros((2, 1)), p3_byzantine_end, {(0, 1): np.zeros(1)})


def test_inbox_orders_senders(p3_byzantine_end):
    """Test mailbox contents and sender order."""
    X = np.array([[0.0], [1.0]])
    inbox = assemble_inbox(X, p3_byzantine_end, {(2, 1): np.array([7.0])})
    assert inbox.receivers == (0, 1)
    assert inbox.mailboxes[1].senders == (0, 2)
    assert inbox.mailboxes[1].vectors.ravel() == pytest.approx([0.0, 7.0])
    assert len(inbox) == 3


def test_pairwise_energy_methods_agree(bridge_4_2, rng):
    """Test trace(X^T W X) against the edge sum."""
    X = rng.normal(size=(8, 3))
    W = laplacian(bridge_4_2)
    assert pairwise_energy_quadratic(X, W) == pytest.approx(pairwise_energy_pairs(X, W))


def test_error_term_vanishes_for_plain_gossip(bridge_4_2, rng):
    """Test E = 0 when no message is altered or clipped."""
    X = rng.normal(size=(8, 2))
    W = laplacian(bridge_4_2)
    eta = 1.0 / 8.0
    Y = plain_gossip_round(X, assemble_inbox(X, bridge_4_2, {}), eta)
    report = extract_error_term(X, Y, eta, W, b=1)
    assert report.norm_sq == pytest.approx(0.0, abs=1e-20)
    assert report.bound_cgplus == pytest.approx(4.0 * report.pairwise_energy)
    assert report.bound_nna == pytest.approx(8.0 * report.pairwise_energy)


def test_error_term_within_cgplus_bound(ghb_4_2, rng):
    """Test ||E||^2 <= 2(b+1)||X||_W^2 for CG+ under a large Byzantine push."""
    X = rng.normal(size=(8, 2))
    forged = {
        (s, r): np.array([50.0, -50.0])
        for r in ghb_4_2.honest_ids()
        for s in ghb_4_2.byzantine_neighbors(r)
    }
    cfg = build_rule_config(AggregationRule.CG_PLUS, 2, ghb_4_2)
    Y = cgplus_round(X, assemble_inbox(X, ghb_4_2, forged), cfg)
    honest, _ = honest_subgraph(ghb_4_2)
    report = extract_error_term(X, Y, cfg.eta, laplacian(honest), b=2)
    assert report.norm_sq <= report.bound_cgplus


def test_build_rule_config_eta_bound(p3):
    """Test the default eta = 1/mu_max and the large-eta check."""
    cfg = build_rule_config(AggregationRule.CG_PLUS, 1, p3)
    assert cfg.eta == pytest.approx(1.0 / 3.0)
    with pytest.raises(ConfigError):
        build_rule_config(AggregationRule.CG_PLUS, 1, p3, eta=0.5)
    relaxed = build_rule_config(AggregationRule.CG_PLUS, 1, p3, eta=0.5, allow_large_eta=True)
    assert relaxed.eta == 0.5
    with pytest.raises(ConfigError):
        build_rule_config(AggregationRule.CLIPPED_GOSSIP_ORACLE, 0, p3)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_rounds_preserve_honest_consensus(seed):
    """Test that a consensus state is a fixed point of every robust rule."""
    t = path_graph(4)
    X = np.tile(np.random.default_rng(seed).normal(size=(1, 3)), (4, 1))
    inbox = assemble_inbox(X, t, {})
    for rule in (AggregationRule.PLAIN_GOSSIP, AggregationRule.CG_PLUS, AggregationRule.NNA):
        outcome = aggregation_round(X, inbox, RuleConfig(rule=rule, b=1, eta=0.25))
        assert outcome.X == pytest.approx(X)
