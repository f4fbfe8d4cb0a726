"""Experiment pipeline: load experiment files, run sweeps, store traces."""

from .experiment import (
    GENERATOR_PARAMS,
    build_run_config,
    build_topology,
    expand_sweep,
    load_experiment,
)
from .sweep import SUMMARY_COLUMNS, SweepResult, run_experiment, run_sweep
from .traces import SavedTrace, load_trace_frame, save_trace, trace_header, trace_to_csv

__all__ = [
    "GENERATOR_PARAMS",
    "load_experiment",
    "build_topology",
    "expand_sweep",
    "build_run_config",
    "run_experiment",
    "run_sweep",
    "SweepResult",
    "SUMMARY_COLUMNS",
    "save_trace",
    "trace_to_csv",
    "trace_header",
    "load_trace_frame",
    "SavedTrace",
]
