"""Simulation engine: tasks, seeded streams, run loops and online monitoring."""

from ..aggregate.inbox import Inbox, assemble_inbox
from .monitor import StepFlags, TheoremMonitor, precondition_failure
from .rng import Purpose, stream
from .run import (
    PreparedRun,
    RunConfig,
    dsgd_run,
    mean_estimation_run,
    prepare_run,
    resolve_comm_rounds,
    simulate,
)
from .tasks import Task, build_task, gradient_oracle
from .trace import TRACE_COLUMNS, TRACE_FORMAT, RunTrace

__all__ = [
    "Inbox",
    "PreparedRun",
    "Purpose",
    "RunConfig",
    "RunTrace",
    "StepFlags",
    "TRACE_COLUMNS",
    "TRACE_FORMAT",
    "Task",
    "TheoremMonitor",
    "assemble_inbox",
    "build_task",
    "dsgd_run",
    "gradient_oracle",
    "mean_estimation_run",
    "precondition_failure",
    "prepare_run",
    "resolve_comm_rounds",
    "simulate",
    "stream",
]
