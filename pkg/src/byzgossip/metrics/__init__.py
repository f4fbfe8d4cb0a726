"""Robustness metrics and theorem-bound evaluators."""

from .bounds import bounds_for, delta_for
from .check import CHECK_NAMES, check_run, within
from .robustness import alpha_measured, mean_shift_sq, mse_to, var_h, var_h_projector

__all__ = [
    "CHECK_NAMES",
    "alpha_measured",
    "bounds_for",
    "check_run",
    "delta_for",
    "mean_shift_sq",
    "mse_to",
    "var_h",
    "var_h_projector",
    "within",
]
