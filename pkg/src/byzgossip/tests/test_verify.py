"""Tests for the acceptance suites and their settings."""

import pytest
import yaml

from byzgossip.errors import ConfigError
from byzgossip.schema.models import AggregationRule
from byzgossip.verify import (
    DEFAULT_SUITES,
    SUITES,
    determinism_configs,
    load_suite_settings,
    property_trials,
    run_suite,
    suite_settings,
)

QUICK_TRIALS = {"trials": 5, "max_honest": 16}


def _by_criterion(results):
    return {result.criterion: result for result in results}


def test_unknown_suite():
    """Test that an unknown suite name is a config error."""
    with pytest.raises(ConfigError, match="nosuch"):
        run_suite("nosuch")


def test_settings_merge_yaml_over_defaults(tmp_path):
    """Test that YAML values override defaults and missing keys are filled in."""
    path = tmp_path / "suites.yml"
    path.write_text(yaml.safe_dump({"suites": {"contraction": {"trials": 3}}}))
    loaded = load_suite_settings(path)
    assert loaded["contraction"]["trials"] == 3
    assert loaded["contraction"]["chained"] == DEFAULT_SUITES["contraction"]["chained"]
    assert set(loaded) == set(SUITES)


def test_settings_fall_back_when_missing(tmp_path):
    """Test the defaults when the settings file is absent."""
    assert load_suite_settings(tmp_path / "absent.yml") == DEFAULT_SUITES


def test_suite_settings_overrides_are_deep():
    """Test that nested overrides keep sibling keys."""
    settings = suite_settings("dsgd", {"gap": {"T": 10}})
    assert settings["gap"]["T"] == 10
    assert settings["gap"]["b"] == DEFAULT_SUITES["dsgd"]["gap"]["b"]


def test_spectra_suite_passes():
    """Test the closed-form spectral identities."""
    results = _by_criterion(run_suite("spectra"))
    assert set(results) == {"breakdown-mu2", "bridge-spectrum", "bridge-separation"}
    assert all(result.passed for result in results.values())
    assert results["bridge-separation"].metrics["mu2_honest"] == pytest.approx(16.0)


def test_breakdown_suite_passes():
    """Test that TwoWorld freezes both cliques under CG+ and NNA."""
    results = run_suite("breakdown", {"rounds": 10, "cases": [[4, 2], [5, 3]]})
    assert [r.criterion for r in results] == ["two-world-CGPlus", "two-world-NNA"]
    assert all(r.passed for r in results)
    assert all(r.metrics["max_move"] <= 1e-12 for r in results)


def test_property_trials_have_no_violations():
    """Test the one-step inequalities on a handful of random instances."""
    settings = suite_settings("contraction", QUICK_TRIALS)
    stats = property_trials(AggregationRule.CG_PLUS, settings)
    assert stats.trials + stats.skipped == 5
    assert stats.trials > 0
    assert (stats.alpha, stats.lambda_, stats.error) == (0, 0, 0)
    assert property_trials(AggregationRule.CG_PLUS, settings) is stats


def test_contraction_suite_quick():
    """Test the contraction suite with reduced trial counts."""
    overrides = dict(QUICK_TRIALS, gossip_graphs=3, gossip_rounds=20, chained={"T": 15})
    results = _by_criterion(run_suite("contraction", overrides))
    assert set(results) == {"cgplus-one-step", "gossip-rate", "chained-bounds"}
    assert all(result.passed for result in results.values())


def test_error_bounds_suite_quick():
    """Test the NNA one-step criterion and the error-term criterion."""
    results = _by_criterion(run_suite("error-bounds", {"trials": 4, "max_honest": 20}))
    assert set(results) == {"nna-one-step", "error-term"}
    assert results["error-term"].passed
    assert results["error-term"].metrics["cgplus_violations"] == 0.0


def test_determinism_configs_cover_both_loops():
    """Test the determinism fixtures."""
    configs = determinism_configs(suite_settings("dsgd"))
    assert {cfg.mode.value for cfg in configs} == {"mean_estimation", "dsgd"}


@pytest.mark.slow
def test_dsgd_suite():
    """Test the D-SGD gap, rate and determinism criteria."""
    results = _by_criterion(run_suite("dsgd"))
    assert set(results) == {"cgplus-nna-gap", "dsgd-rate", "determinism"}
    assert all(result.passed for result in results.values())
