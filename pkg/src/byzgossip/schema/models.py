"""Schema models for byzgossip configs, reports and traces."""

import math
from enum import Enum
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class AggregationRule(str, Enum):
    """Synchronous aggregation rules."""

    PLAIN_GOSSIP = "PlainGossip"
    CG_PLUS = "CGPlus"
    NNA = "NNA"
    CLIPPED_GOSSIP_ORACLE = "ClippedGossipOracle"


class AttackKind(str, Enum):
    """Byzantine attack families."""

    NONE = "None"
    ALIE = "ALIE"
    FOE = "FOE"
    DISSENSUS = "Dissensus"
    SPECTRAL_HETEROGENEITY = "SpectralHeterogeneity"
    TWO_WORLD = "TwoWorld"
    LOOKAHEAD = "Lookahead"


class TaskKind(str, Enum):
    """Local objective families."""

    MEAN_ESTIMATION = "MeanEstimation"
    QUADRATIC_SUM = "QuadraticSum"
    LOGISTIC_SYNTHETIC = "LogisticSynthetic"


class RunMode(str, Enum):
    """Simulation loop."""

    MEAN_ESTIMATION = "mean_estimation"
    DSGD = "dsgd"


class RuleConfig(BaseModel):
    """Aggregation rule configuration.

    ``eta`` is the communication step-size. Use ``build_rule_config`` to derive it
    from a topology so the ``eta <= 1/mu_max`` precondition is enforced.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    rule: AggregationRule = Field(..., description="Aggregation rule")
    b: int = Field(0, ge=0, description="Assumed Byzantine neighbors per honest node")
    eta: float = Field(..., gt=0, description="Communication step-size")
    nna_local_step: bool = Field(
        False, description="NNA only: use the per-node step 1/(|n(i)| - b + 1)"
    )
    allow_large_eta: bool = Field(False, description="Skip the eta <= 1/mu_max check")


class AttackSpec(BaseModel):
    """Byzantine attack description.

    ``scaling`` is either a fixed zeta or a non-empty grid searched every round.
    Grid candidates are scaled per target by ``1/max(||a_i||, eps)`` when
    ``normalize`` is set, so a candidate ``c`` moves the declared vector by ``c``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: AttackKind = AttackKind.NONE
    scaling: float | list[float] = 1.0
    centered_on_target: bool = True
    normalize: bool = True
    per_node_search: bool = False
    horizon: int = Field(8, ge=0, description="Lookahead attack horizon s")

    @field_validator("scaling")
    @classmethod
    def _check_scaling(cls, value: float | list[float]) -> float | list[float]:
        if isinstance(value, list):
            if not value:
                raise ValueError("scaling grid must not be empty")
            if not all(math.isfinite(v) for v in value):
                raise ValueError("scaling grid must be finite")
        elif not math.isfinite(value):
            raise ValueError("fixed scaling must be finite")
        return value

    @property
    def is_search(self) -> bool:
        return isinstance(self.scaling, list)


class TaskSpec(BaseModel):
    """Local objective description (targets, noise and initial point)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: TaskKind = TaskKind.MEAN_ESTIMATION
    dim: int = Field(2, ge=1)
    noise_sigma: float = Field(0.0, ge=0.0, description="Coordinate std of gradient noise")
    target_center: float = 0.0
    target_spread: float = Field(1.0, ge=0.0, description="Std of y_i around the center")
    init_point: float = Field(0.0, description="Shared initial coordinate (optimization tasks)")
    init_jitter: float = Field(0.0, ge=0.0, description="Per-node std added to the initial point")
    samples_per_node: int = Field(50, ge=1)
    class_separation: float = Field(2.0, gt=0.0)
    dirichlet_alpha: float = Field(5.0, gt=0.0)
    ridge: float = Field(0.01, ge=0.0)
    block_values: Optional[list[float]] = Field(
        None, description="MeanEstimation: every coordinate of y_i is the value of its block"
    )


class SpectralReport(BaseModel):
    """JSON record of a Laplacian spectrum."""

    n: int
    mu2: float
    mu_max: float
    gamma: float
    kernel_dim: int
    connected: bool
    fiedler: list[float] = Field(default_factory=list)


class MembershipReport(BaseModel):
    """Outcome of a class membership check."""

    member: bool
    mu2: float = Field(..., description="Algebraic connectivity of the honest subgraph")
    mu_min: float
    b: int
    max_byzantine_neighbors: int
    failing: list[str] = Field(default_factory=list, description="Unmet criteria")

    def __bool__(self) -> bool:
        return self.member


class ErrorTermSummary(BaseModel):
    """Scalar part of an error-term report."""

    norm_sq: float
    pairwise_energy: float
    bound_cgplus: float
    bound_nna: float


class BoundSet(BaseModel):
    """Closed-form one-step and chained bounds for a robust rule.

    ``rate`` is ``eta * mu2``. It equals ``gamma`` when ``eta = 1/mu_max(G_H)`` and
    replaces it in the chained bounds for smaller step-sizes.
    """

    rule: AggregationRule
    mu2: float
    mu_max: float
    b: int
    eta: float
    alpha_bound: float
    lambda_bound: float
    delta: float
    gamma: float
    rate: float
    feasible: bool
    asymptotic_bias_factor: float
    tight_bias_factor: float
    reduction_alpha_multistep: float = 0.0
    reduction_lambda_multistep: float

    def chained_variance(self, t: int, var0: float) -> float:
        """Chained variance bound after t aggregation steps."""
        return (1.0 - self.rate * (1.0 - self.delta)) ** t * var0

    def cumulative_bias(self, t: int, var0: float) -> float:
        """Bound on the honest-mean drift after t aggregation steps."""
        contraction = 1.0 - self.rate * (1.0 - self.delta)
        root = math.sqrt(max(contraction, 0.0))
        if root >= 1.0:
            return math.inf
        geometric = (1.0 - root**t) / (1.0 - root)
        return math.sqrt(self.lambda_bound) * geometric * math.sqrt(var0)

    def asymptotic_bias_bound(self, var0: float, tight: bool = False) -> float:
        """Bound on the squared honest-mean drift as t grows."""
        factor = self.tight_bias_factor if tight else self.asymptotic_bias_factor
        return factor * var0


class RoundCheck(BaseModel):
    """Per-round outcome of the theorem checks."""

    round: int
    alpha_ok: bool
    lambda_ok: bool
    chained_variance_ok: bool
    cumulative_bias_ok: bool
    asymptotic_bias_ok: bool


class ViolationReport(BaseModel):
    """Theorem-check report for one trace."""

    checked: bool
    note: Optional[str] = None
    rounds: list[RoundCheck] = Field(default_factory=list)
    counts: dict[str, int] = Field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


class RunHeader(BaseModel):
    """JSON header stored next to a trace CSV."""

    name: str
    mode: RunMode
    rule: AggregationRule
    attack: AttackKind
    b: int
    eta: float
    seed: int
    T: int
    comm_rounds_per_step: int
    n_honest: int
    n_byzantine: int
    spectral_full: SpectralReport
    spectral_honest: SpectralReport
    smoothness: Optional[float] = None
    noise_sigma: float = 0.0
    heterogeneity: Optional[float] = None
    delta: Optional[float] = None
    gamma: Optional[float] = None
    config: dict[str, Any] = Field(default_factory=dict, description="Config echo")


class TraceRow(BaseModel):
    """Per-round metrics. Field order is the frozen CSV column order."""

    round: int
    var_h: float
    bias: float
    pre_var: float
    mse: float
    mean_shift_sq: float
    grad_norm_sq: float = float("nan")
    err_norm_sq: float = 0.0
    pairwise_energy: float = 0.0
    zeta: float = float("nan")
    clipped: int = 0
    monitored: bool = False
    ok_alpha: bool = True
    ok_lambda: bool = True
    ok_error: bool = True


class CriterionResult(BaseModel):
    """One pass/fail line of a verification suite."""

    suite: str
    criterion: str
    passed: bool
    detail: str = ""
    metrics: dict[str, float] = Field(default_factory=dict)


# Experiment files


class TopologySpec(BaseModel):
    """Topology source: a named generator or an edge-list file."""

    model_config = ConfigDict(extra="forbid")

    generator: Optional[
        Literal[
            "complete",
            "path",
            "ring",
            "two_clique_bridge",
            "three_clique_ghb",
            "erdos_renyi",
            "random_gamma",
        ]
    ] = None
    params: dict[str, float | int] = Field(default_factory=dict)
    file: Optional[str] = None
    byzantine_per_node: Optional[int] = Field(None, ge=0)
    n_byzantine: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _one_source(self) -> "TopologySpec":
        if (self.generator is None) == (self.file is None):
            raise ValueError("topology needs exactly one of 'generator' or 'file'")
        return self


class SweepSpec(BaseModel):
    """Sweep axes, expanded as a Cartesian product in field order."""

    model_config = ConfigDict(extra="forbid")

    rule: Optional[list[AggregationRule]] = None
    attack: Optional[list[AttackKind]] = None
    b: Optional[list[int]] = None
    seed: Optional[list[int]] = None

    @model_validator(mode="after")
    def _non_empty(self) -> "SweepSpec":
        for axis in ("rule", "attack", "b", "seed"):
            values = getattr(self, axis)
            if values is not None and len(values) == 0:
                raise ValueError(f"sweep axis '{axis}' is empty")
        return self

    def axes(self) -> list[tuple[str, list[Any]]]:
        return [
            (axis, values)
            for axis in ("rule", "attack", "b", "seed")
            if (values := getattr(self, axis)) is not None
        ]


class OutputSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dir: Optional[str] = None
    stem: Optional[str] = None


class ExperimentFile(BaseModel):
    """Strict JSON experiment file mirroring a run config plus sweep axes.

    Documented defaults: ``mode`` mean_estimation, ``b`` 0, ``eta`` 1/mu_max(G),
    ``attack`` None, ``rho`` 0.05, ``beta`` 0.9, ``T`` 100,
    ``comm_rounds_per_step`` 1, ``seed`` 0, ``monitor`` true.
    """

    model_config = ConfigDict(extra="forbid")

    name: str
    mode: RunMode = RunMode.MEAN_ESTIMATION
    topology: TopologySpec
    rule: AggregationRule
    b: int = Field(0, ge=0)
    eta: Optional[float] = Field(None, gt=0)
    allow_large_eta: bool = False
    nna_local_step: bool = False
    attack: AttackSpec = Field(default_factory=AttackSpec)
    task: TaskSpec = Field(default_factory=TaskSpec)
    rho: float = Field(0.05, gt=0)
    beta: float = Field(0.9, ge=0.0, lt=1.0)
    T: int = Field(100, ge=0)
    comm_rounds_per_step: int | Literal["auto"] = 1
    seed: int = Field(0, ge=0, lt=2**64)
    monitor: bool = True
    sweep: SweepSpec = Field(default_factory=SweepSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)

    @field_validator("comm_rounds_per_step")
    @classmethod
    def _check_comm_rounds(cls, value: int | str) -> int | str:
        if isinstance(value, int) and value < 1:
            raise ValueError("comm_rounds_per_step must be >= 1 or 'auto'")
        return value
