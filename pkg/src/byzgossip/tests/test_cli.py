"""Tests for the command-line interface."""

import json

import pytest
from loguru import logger
from typer.testing import CliRunner

from byzgossip import __version__
from byzgossip.cli import app
from byzgossip.config import config
from byzgossip.schema.models import CriterionResult

runner = CliRunner()


@pytest.fixture(autouse=True)
def reset_logger():
    """Drop sinks bound to the runner's captured streams."""
    yield
    logger.remove()


def test_version():
    """Test --version."""
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_spectra_margins_json():
    """Test the CG+ and NNA margins of the three-clique construction."""
    result = runner.invoke(
        app, ["spectra", "three_clique_ghb", "4", "2", "--json", "--log-level", "ERROR"]
    )
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["honest"]["mu2"] == pytest.approx(4.0)
    assert report["margins"]["cgplus"] == pytest.approx(-2.0)
    assert report["margins"]["nna"] == pytest.approx(-12.0)
    assert report["membership"]["member"] is False


def test_spectra_table():
    """Test the human-readable report on K_26."""
    result = runner.invoke(app, ["spectra", "complete", "26"])
    assert result.exit_code == 0
    assert "Spectra of complete 26" in result.output
    assert "Margin mu2 - 2(b+1) (CG+): 24" in result.output


def test_spectra_bad_inputs(tmp_path, monkeypatch):
    """Test that malformed graphs and parameters exit with code 2."""
    monkeypatch.chdir(tmp_path)
    (tmp_path / "bad.txt").write_text("0 1\n1 x\n")
    assert runner.invoke(app, ["spectra", "bad.txt"]).exit_code == 2
    assert runner.invoke(app, ["spectra", "missing.txt"]).exit_code == 2
    assert runner.invoke(app, ["spectra", "ring", "five"]).exit_code == 2
    assert runner.invoke(app, ["spectra", "ring", "5", "6"]).exit_code == 2


def test_simulate_bundled_experiment(tmp_path):
    """Test a full simulate run writing traces and a summary."""
    result = runner.invoke(
        app,
        [
            "simulate",
            "-c",
            str(config.experiments_dir / "p3_gossip.json"),
            "-o",
            str(tmp_path),
            "--log-level",
            "ERROR",
        ],
    )
    assert result.exit_code == 0
    assert (tmp_path / "summary.csv").exists()
    assert list(tmp_path.glob("p3_gossip*.csv"))


def test_simulate_missing_config(tmp_path):
    """Test that a missing experiment file exits with code 2."""
    result = runner.invoke(app, ["simulate", "-c", str(tmp_path / "absent.json")])
    assert result.exit_code == 2


def test_verify_unknown_suite():
    """Test that an unknown suite exits with code 2."""
    assert runner.invoke(app, ["verify", "nosuch"]).exit_code == 2


def test_verify_spectra_json():
    """Test JSON results of a passing suite."""
    result = runner.invoke(app, ["verify", "spectra", "--json", "--log-level", "ERROR"])
    assert result.exit_code == 0
    results = json.loads(result.stdout)
    assert {r["criterion"] for r in results} == {
        "breakdown-mu2",
        "bridge-spectrum",
        "bridge-separation",
    }


def test_verify_failure_exit_code(mocker):
    """Test that a failing criterion exits with code 1."""
    failing = CriterionResult(suite="spectra", criterion="bridge-spectrum", passed=False)
    mocker.patch("byzgossip.cli.run_suite", return_value=[failing])
    result = runner.invoke(app, ["verify", "spectra"])
    assert result.exit_code == 1
    assert "FAIL" in result.output
