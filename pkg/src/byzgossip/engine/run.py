"""Multi-round simulations: repeated aggregation and momentum D-SGD."""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..adversary.forge import forge_messages
from ..adversary.view import HonestContext, OmniscientView
from ..aggregate.inbox import assemble_inbox
from ..aggregate.rules import aggregation_round
from ..errors import ConfigError, ContractViolationError, TheoremViolationError
from ..graph.spectral import SpectralInfo, spectral_info
from ..graph.topology import Topology, laplacian
from ..metrics.bounds import delta_for
from ..metrics.check import check_run
from ..metrics.robustness import mean_shift_sq, mse_to, var_h
from ..schema.models import (
    AggregationRule,
    AttackKind,
    AttackSpec,
    RuleConfig,
    RunHeader,
    RunMode,
    TaskKind,
    TaskSpec,
    TraceRow,
)
from .monitor import TheoremMonitor
from .rng import Purpose, stream
from .tasks import Task, build_task, gradient_oracle
from .trace import RunTrace


class RunConfig(BaseModel):
    """Everything a single run needs. ``seed`` fixes every random stream."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "run"
    mode: RunMode = RunMode.MEAN_ESTIMATION
    topology: Topology
    rule_cfg: RuleConfig
    attack: AttackSpec = Field(default_factory=AttackSpec)
    task: TaskSpec = Field(default_factory=TaskSpec)
    rho: float = Field(0.05, gt=0)
    beta: float = Field(0.9, ge=0.0, lt=1.0)
    T: int = Field(100, ge=0)
    comm_rounds_per_step: int | Literal["auto"] = 1
    seed: int = Field(0, ge=0, lt=2**64)
    monitor: bool = True
    strict: bool = False


@dataclass(frozen=True)
class PreparedRun:
    cfg: RunConfig
    context: HonestContext
    spectral_full: SpectralInfo
    task: Task
    comm_rounds: int
    monitor: TheoremMonitor


def resolve_comm_rounds(cfg: RunConfig, spectral_honest: SpectralInfo) -> int:
    """Aggregation steps per gradient step; "auto" is ``ceil(ln 10 / (eta mu2 (1 - delta)))``."""
    if cfg.comm_rounds_per_step != "auto":
        if cfg.comm_rounds_per_step < 1:
            raise ConfigError("comm_rounds_per_step must be >= 1")
        return cfg.comm_rounds_per_step
    rule = cfg.rule_cfg
    delta = delta_for(rule.rule, spectral_honest.mu2, rule.b)
    rate = rule.eta * spectral_honest.mu2
    if rate <= 0 or delta >= 1.0:
        raise ConfigError(f"'auto' comm rounds undefined: eta*mu2={rate:.4g}, delta={delta:.4g}")
    return max(1, math.ceil(math.log(10.0) / (rate * (1.0 - delta))))


def prepare_run(cfg: RunConfig) -> PreparedRun:
    """Validate a run config against its topology and materialize the task.

    Raises:
        ConfigError: On any inconsistency, before the first round
    """
    topology = cfg.topology
    context = HonestContext.from_topology(topology)
    honest_ids = topology.honest_ids()
    if not honest_ids:
        raise ConfigError("topology has no honest nodes")

    spectral_full = spectral_info(laplacian(topology))
    eta_max = 1.0 / spectral_full.mu_max if spectral_full.mu_max > 0 else math.inf
    if cfg.rule_cfg.eta > eta_max * (1.0 + 1e-12) and not cfg.rule_cfg.allow_large_eta:
        raise ConfigError(f"eta={cfg.rule_cfg.eta:.6g} exceeds 1/mu_max(G)={eta_max:.6g}")

    if cfg.mode == RunMode.MEAN_ESTIMATION and cfg.task.kind != TaskKind.MEAN_ESTIMATION:
        raise ConfigError(
            f"mean_estimation runs need a MeanEstimation task, got {cfg.task.kind.value}"
        )
    if cfg.mode == RunMode.DSGD and cfg.task.kind == TaskKind.MEAN_ESTIMATION:
        raise ConfigError("dsgd runs need an optimization task")

    kind = cfg.attack.kind
    if topology.byzantine and kind == AttackKind.ALIE and len(honest_ids) < 2:
        raise ConfigError("ALIE needs at least 2 honest nodes")
    needs_fiedler = kind == AttackKind.SPECTRAL_HETEROGENEITY or (
        kind == AttackKind.TWO_WORLD and context.honest.blocks is None
    )
    if topology.byzantine and needs_fiedler and context.spectral.mu2 <= 0:
        raise ConfigError(f"{kind.value} needs a connected honest subgraph")
    oracle = cfg.rule_cfg.rule == AggregationRule.CLIPPED_GOSSIP_ORACLE
    if oracle and cfg.rule_cfg.b >= len(honest_ids):
        raise ConfigError("ClippedGossipOracle needs b < |H|")

    comm_rounds = resolve_comm_rounds(cfg, context.spectral) if cfg.mode == RunMode.DSGD else 1
    task = build_task(cfg.task, cfg.seed, honest_ids, context.honest.blocks)
    monitor = TheoremMonitor(cfg.rule_cfg, context, enabled=cfg.monitor, strict=cfg.strict)
    return PreparedRun(cfg, context, spectral_full, task, comm_rounds, monitor)


@dataclass(frozen=True)
class _Step:
    X: np.ndarray
    pre_var: float
    mse: float
    shift: float
    err_norm_sq: float
    energy: float
    zeta: float
    clipped: int
    monitored: bool
    ok_alpha: bool
    ok_lambda: bool
    ok_error: bool


def _communicate(X: np.ndarray, run: PreparedRun, t: int) -> _Step:
    """One synchronous exchange: forge, assemble, aggregate, monitor."""
    cfg = run.cfg
    view = OmniscientView.build(X, run.context, cfg.rule_cfg.eta)
    forged = forge_messages(view, cfg.attack, cfg.rule_cfg)
    inbox = assemble_inbox(view.X, run.context.topology, forged.entries)
    outcome = aggregation_round(view.X, inbox, cfg.rule_cfg, run.context.honest_labels)
    if not view.unchanged():
        raise ContractViolationError(f"round {t}: honest snapshot was mutated")

    flags = run.monitor.observe(t, view.X, outcome.X)
    center = view.mean
    return _Step(
        X=outcome.X,
        pre_var=var_h(view.X),
        mse=mse_to(outcome.X, center),
        shift=mean_shift_sq(view.X, outcome.X),
        err_norm_sq=flags.error.norm_sq,
        energy=flags.error.pairwise_energy,
        zeta=forged.zeta if run.context.topology.byzantine else float("nan"),
        clipped=outcome.clipped,
        monitored=flags.monitored,
        ok_alpha=flags.ok_alpha,
        ok_lambda=flags.ok_lambda,
        ok_error=flags.ok_error,
    )


def _header(run: PreparedRun) -> RunHeader:
    cfg = run.cfg
    bounds = run.monitor.bounds
    echo = cfg.model_dump(mode="json", exclude={"topology"})
    echo["topology"] = {
        "n": cfg.topology.n,
        "edges": cfg.topology.n_edges,
        "byzantine": sorted(cfg.topology.byzantine),
    }
    return RunHeader(
        name=cfg.name,
        mode=cfg.mode,
        rule=cfg.rule_cfg.rule,
        attack=cfg.attack.kind,
        b=cfg.rule_cfg.b,
        eta=cfg.rule_cfg.eta,
        seed=cfg.seed,
        T=cfg.T,
        comm_rounds_per_step=run.comm_rounds,
        n_honest=run.context.honest.n,
        n_byzantine=len(cfg.topology.byzantine),
        spectral_full=run.spectral_full.to_report(),
        spectral_honest=run.context.spectral.to_report(),
        smoothness=run.task.smoothness,
        noise_sigma=cfg.task.noise_sigma,
        heterogeneity=run.task.heterogeneity,
        delta=bounds.delta if math.isfinite(bounds.delta) else None,
        gamma=run.context.spectral.gamma,
        config=echo,
    )


def _initial_row(X: np.ndarray, grad_norm_sq: float) -> TraceRow:
    variance = var_h(X)
    return TraceRow(
        round=0,
        var_h=variance,
        bias=0.0,
        pre_var=variance,
        mse=variance,
        mean_shift_sq=0.0,
        grad_norm_sq=grad_norm_sq,
    )


def _row(
    t: int,
    X: np.ndarray,
    mean0: np.ndarray,
    step: _Step,
    clipped: int,
    flags: tuple[bool, bool, bool, bool],
    grad_norm_sq: float,
) -> TraceRow:
    monitored, ok_alpha, ok_lambda, ok_error = flags
    return TraceRow(
        round=t,
        var_h=var_h(X),
        bias=float(np.linalg.norm(X.mean(axis=0) - mean0)),
        pre_var=step.pre_var,
        mse=step.mse,
        mean_shift_sq=step.shift,
        grad_norm_sq=grad_norm_sq,
        err_norm_sq=step.err_norm_sq,
        pairwise_energy=step.energy,
        zeta=step.zeta,
        clipped=clipped,
        monitored=monitored,
        ok_alpha=ok_alpha,
        ok_lambda=ok_lambda,
        ok_error=ok_error,
    )


def _finish(run: PreparedRun, rows: list[TraceRow], X: np.ndarray) -> RunTrace:
    trace = RunTrace(header=_header(run), rows=rows, bounds=run.monitor.bounds, final_X=X)
    if run.cfg.monitor:
        trace.violations = check_run(trace, run.monitor.bounds, run.monitor.reason)
        if run.cfg.strict and trace.violations.total:
            raise TheoremViolationError(f"{run.cfg.name}: {trace.violations.counts}")
    logger.info(
        f"{run.cfg.name}: {len(rows) - 1} rounds, final Var_H={rows[-1].var_h:.4g}, "
        f"bias={rows[-1].bias:.4g}"
    )
    return trace


def mean_estimation_run(cfg: RunConfig) -> RunTrace:
    """Repeated aggregation from ``x_i = y_i``; T rounds, T+1 trace rows.

    Args:
        cfg: Run configuration with a MeanEstimation task

    Returns:
        RunTrace with violations attached when monitoring is enabled
    """
    if cfg.mode != RunMode.MEAN_ESTIMATION:
        raise ConfigError(f"mean_estimation_run got mode {cfg.mode.value}")
    run = prepare_run(cfg)
    X = run.task.initial_point(cfg.seed, run.context.topology.honest_ids())
    mean0 = X.mean(axis=0)
    rows = [_initial_row(X, float("nan"))]

    for t in range(1, cfg.T + 1):
        step = _communicate(X, run, t)
        X = step.X
        flags = (step.monitored, step.ok_alpha, step.ok_lambda, step.ok_error)
        rows.append(_row(t, X, mean0, step, step.clipped, flags, float("nan")))

    return _finish(run, rows, X)


def dsgd_run(cfg: RunConfig) -> RunTrace:
    """Momentum D-SGD: local step on every honest node, then robust communication.

    Per round: ``g_i = grad f_i(x_i) + xi_i``; ``m_i = beta m_i + (1 - beta) g_i``;
    ``x_i = x_i - rho m_i``; then ``comm_rounds_per_step`` aggregation steps.
    Byzantine nodes keep no optimizer state.
    """
    if cfg.mode != RunMode.DSGD:
        raise ConfigError(f"dsgd_run got mode {cfg.mode.value}")
    run = prepare_run(cfg)
    honest_ids = run.context.topology.honest_ids()
    X = run.task.initial_point(cfg.seed, honest_ids)
    momentum = np.zeros_like(X)
    mean0 = X.mean(axis=0)
    rows = [_initial_row(X, run.task.honest_grad_norm_sq(X))]

    for t in range(1, cfg.T + 1):
        for row, node in enumerate(honest_ids):
            rng = stream(cfg.seed, Purpose.GRADIENT_NOISE, node=node, round=t)
            g = gradient_oracle(run.task, row, X[row], rng)
            momentum[row] = cfg.beta * momentum[row] + (1.0 - cfg.beta) * g
        X = X - cfg.rho * momentum

        clipped = 0
        monitored, ok_alpha, ok_lambda, ok_error = False, True, True, True
        for _ in range(run.comm_rounds):
            step = _communicate(X, run, t)
            X = step.X
            clipped += step.clipped
            monitored = monitored or step.monitored
            ok_alpha &= step.ok_alpha
            ok_lambda &= step.ok_lambda
            ok_error &= step.ok_error
        flags = (monitored, ok_alpha, ok_lambda, ok_error)
        rows.append(_row(t, X, mean0, step, clipped, flags, run.task.honest_grad_norm_sq(X)))

    return _finish(run, rows, X)


def simulate(cfg: RunConfig) -> RunTrace:
    """Run ``cfg`` with the loop its mode selects."""
    if cfg.mode == RunMode.DSGD:
        return dsgd_run(cfg)
    return mean_estimation_run(cfg)
