"""Schema definitions for byzgossip."""

from .models import (
    AggregationRule,
    AttackKind,
    AttackSpec,
    BoundSet,
    CriterionResult,
    ErrorTermSummary,
    ExperimentFile,
    MembershipReport,
    OutputSpec,
    RoundCheck,
    RuleConfig,
    RunHeader,
    RunMode,
    SpectralReport,
    SweepSpec,
    TaskKind,
    TaskSpec,
    TopologySpec,
    TraceRow,
    ViolationReport,
)

__all__ = [
    "AggregationRule",
    "AttackKind",
    "AttackSpec",
    "BoundSet",
    "CriterionResult",
    "ErrorTermSummary",
    "ExperimentFile",
    "MembershipReport",
    "OutputSpec",
    "RoundCheck",
    "RuleConfig",
    "RunHeader",
    "RunMode",
    "SpectralReport",
    "SweepSpec",
    "TaskKind",
    "TaskSpec",
    "TopologySpec",
    "TraceRow",
    "ViolationReport",
]
