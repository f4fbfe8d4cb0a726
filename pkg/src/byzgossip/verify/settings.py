"""Suite settings loaded from data/seeds/verify_suites.yml."""

import copy
from pathlib import Path
from typing import Any

import yaml
from loguru import logger

from ..config import config

# Used when the seed file is missing or unreadable
DEFAULT_SUITES: dict[str, dict[str, Any]] = {
    "spectra": {
        "breakdown_sizes": [3, 4, 5, 6, 7, 8],
        "circulant_cases": [[5, 2], [7, 3], [8, 4], [13, 8]],
        "bridge": {"m": 13, "k": 8, "byzantine_per_node": 6, "n_byzantine": 8},
        "tol": 1.0e-8,
    },
    "contraction": {
        "trials": 1000,
        "seed": 2024,
        "min_honest": 10,
        "max_honest": 30,
        "min_edge_prob": 0.5,
        "max_b": 6,
        "max_dim": 6,
        "grid": [0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
        "gossip_graphs": 50,
        "gossip_rounds": 100,
        "chained": {"m": 10, "k": 6, "b": 3, "T": 60, "dim": 3, "seed": 7},
    },
    "error-bounds": {
        "trials": 1000,
        "seed": 2024,
        "min_honest": 12,
        "max_honest": 30,
        "min_edge_prob": 0.6,
        "max_b": 4,
        "max_dim": 6,
        "grid": [0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
    },
    "breakdown": {
        "cases": [[4, 2], [5, 3], [6, 2], [6, 6]],
        "rounds": 50,
        "dim": 2,
        "tol": 1.0e-12,
    },
    "dsgd": {
        "gap": {
            "m": 13,
            "k": 8,
            "b": 6,
            "n_byzantine": 8,
            "T": 300,
            "rho": 0.05,
            "dim": 4,
            "init_jitter": 1.0,
            "seed": 11,
            "grid": [0.0, 0.01, 0.02, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
            "max_cgplus_ratio": 0.1,
            "min_gap": 5.0,
        },
        "rate": {
            "m": 8,
            "k": 3,
            "b": 1,
            "horizons": [200, 2000],
            "c": 0.5,
            "dim": 20,
            "noise_sigma": 1.0,
            "window": 0.5,
            "min_improvement": 2.0,
            "seed": 5,
        },
        "determinism": {"T": 20, "seed": 3},
    },
}


def _merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_suite_settings(settings_file: Path | None = None) -> dict[str, dict[str, Any]]:
    """Load suite settings from YAML, filling missing keys from the defaults.

    Args:
        settings_file: Path to the YAML file (default ``seeds_dir/verify_suites.yml``)

    Returns:
        Dict mapping suite name to its settings
    """
    if settings_file is None:
        settings_file = config.seeds_dir / "verify_suites.yml"

    if not settings_file.exists():
        logger.warning(f"Suite settings not found: {settings_file}, using defaults")
        return copy.deepcopy(DEFAULT_SUITES)

    try:
        with open(settings_file, "r", encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}
        logger.info(f"Loaded suite settings from {settings_file}")
        return _merge(DEFAULT_SUITES, loaded.get("suites", {}))
    except Exception as e:
        logger.error(f"Failed to load suite settings from {settings_file}: {e}")
        return copy.deepcopy(DEFAULT_SUITES)


def suite_settings(
    name: str, overrides: dict[str, Any] | None = None, settings_file: Path | None = None
) -> dict[str, Any]:
    """Settings of one suite with optional overrides merged on top."""
    settings = load_suite_settings(settings_file).get(name, {})
    return _merge(settings, overrides or {})
