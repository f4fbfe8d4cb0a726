"""Acceptance suites for the simulator's theoretical guarantees."""

from .settings import DEFAULT_SUITES, load_suite_settings, suite_settings
from .suites import (
    ROBUSTNESS_ATTACKS,
    SUITES,
    TrialStats,
    determinism_configs,
    predicted_bridge_spectrum,
    property_trials,
    run_suite,
)

__all__ = [
    "DEFAULT_SUITES",
    "ROBUSTNESS_ATTACKS",
    "SUITES",
    "TrialStats",
    "determinism_configs",
    "load_suite_settings",
    "predicted_bridge_spectrum",
    "property_trials",
    "run_suite",
    "suite_settings",
]
