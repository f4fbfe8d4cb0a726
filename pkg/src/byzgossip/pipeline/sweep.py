"""Sweep execution: run every expanded experiment and write the summaries."""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import pandas as pd
from loguru import logger

from ..config import config
from ..engine.run import simulate
from ..errors import ByzGossipError, ConfigError
from ..logging import current_level, setup_worker_logging
from ..schema.models import ExperimentFile
from ..utils.hashing import run_key
from .experiment import build_run_config, expand_sweep
from .traces import save_trace

SUMMARY_COLUMNS = [
    "stem",
    "name",
    "rule",
    "attack",
    "b",
    "seed",
    "T",
    "status",
    "initial_var_h",
    "final_var_h",
    "final_bias",
    "checked",
    "violations",
    "monitor_failures",
    "trace_sha256",
    "detail",
]

STATUS_OK = "ok"
STATUS_VIOLATIONS = "violations"
STATUS_CONFIG_ERROR = "config_error"
STATUS_ERROR = "error"


@dataclass
class SweepResult:
    """Outcome of a sweep: one summary row per expanded run."""

    out_dir: Path
    rows: list[dict] = field(default_factory=list)
    summary_path: Optional[Path] = None
    violations_path: Optional[Path] = None

    def count(self, status: str) -> int:
        return sum(1 for row in self.rows if row["status"] == status)

    @property
    def exit_code(self) -> int:
        """2 when any run was misconfigured, 1 on errors or violations, else 0."""
        if self.count(STATUS_CONFIG_ERROR):
            return 2
        if self.count(STATUS_ERROR) or self.count(STATUS_VIOLATIONS):
            return 1
        return 0


def _base_row(experiment: ExperimentFile, stem: str) -> dict:
    return {
        "stem": stem,
        "name": experiment.name,
        "rule": experiment.rule.value,
        "attack": experiment.attack.kind.value,
        "b": experiment.b,
        "seed": experiment.seed,
        "T": experiment.T,
        "status": STATUS_OK,
        "initial_var_h": float("nan"),
        "final_var_h": float("nan"),
        "final_bias": float("nan"),
        "checked": False,
        "violations": 0,
        "monitor_failures": 0,
        "trace_sha256": "",
        "detail": "",
    }


def run_experiment(
    experiment: ExperimentFile,
    out_dir: Path,
    base_dir: Optional[Path] = None,
    monitor: Optional[bool] = None,
) -> tuple[dict, Optional[dict]]:
    """Run one expanded experiment and save its trace.

    Failures are reported in the returned summary row instead of raised, so one
    bad point does not abort a sweep.

    Returns:
        Tuple of (summary row, violation report dump or None)
    """
    stem = experiment.output.stem or run_key(
        experiment.name,
        experiment.rule.value,
        experiment.attack.kind.value,
        experiment.b,
        experiment.seed,
    )
    row = _base_row(experiment, stem)
    with logger.contextualize(run=stem):
        return _run_one(experiment, row, out_dir, base_dir, monitor)


def _run_one(
    experiment: ExperimentFile,
    row: dict,
    out_dir: Path,
    base_dir: Optional[Path],
    monitor: Optional[bool],
) -> tuple[dict, Optional[dict]]:
    stem = row["stem"]
    try:
        trace = simulate(build_run_config(experiment, base_dir=base_dir, monitor=monitor))
    except ConfigError as e:
        logger.error(f"{stem}: configuration error: {e}")
        row.update(status=STATUS_CONFIG_ERROR, detail=str(e))
        return row, None
    except ByzGossipError as e:
        logger.error(f"{stem}: {type(e).__name__}: {e}")
        row.update(status=STATUS_ERROR, detail=f"{type(e).__name__}: {e}")
        return row, None

    saved = save_trace(trace, out_dir, stem)
    report = trace.violations
    row.update(
        initial_var_h=trace.rows[0].var_h,
        final_var_h=trace.rows[-1].var_h,
        final_bias=trace.rows[-1].bias,
        checked=bool(report and report.checked),
        violations=report.total if report else 0,
        monitor_failures=trace.monitor_failures,
        trace_sha256=saved.sha256,
        detail=(report.note or "") if report else "",
    )
    if row["violations"] or row["monitor_failures"]:
        row["status"] = STATUS_VIOLATIONS
    return row, report.model_dump(mode="json") if report else None


def _run_payload(
    payload: str, out_dir: str, base_dir: Optional[str], monitor: Optional[bool]
) -> tuple[dict, Optional[dict]]:
    experiment = ExperimentFile.model_validate_json(payload)
    return run_experiment(
        experiment, Path(out_dir), Path(base_dir) if base_dir else None, monitor
    )


def run_sweep(
    experiment: ExperimentFile,
    out_dir: Optional[Path] = None,
    jobs: int = 1,
    seed: Optional[int] = None,
    monitor: Optional[bool] = None,
    base_dir: Optional[Path] = None,
) -> SweepResult:
    """Expand and run an experiment, writing traces, summary.csv and violations.json.

    Args:
        experiment: Parsed experiment file
        out_dir: Output directory (default: the file's ``output.dir`` or ``config.out_dir``)
        jobs: Worker processes; 1 runs inline
        seed: Replaces the seed and any seed axis
        monitor: Overrides the file's ``monitor`` flag
        base_dir: Directory relative graph paths are resolved against

    Returns:
        SweepResult with rows in expansion order
    """
    if seed is not None:
        sweep = experiment.sweep.model_copy(update={"seed": None})
        experiment = experiment.model_copy(update={"seed": seed, "sweep": sweep})
    if out_dir is None:
        out_dir = Path(experiment.output.dir) if experiment.output.dir else config.out_dir
    out_dir = config.ensure_out_dir(Path(out_dir))

    runs = expand_sweep(experiment)
    if len(runs) > 1 and experiment.output.stem:
        # a fixed stem would make every run overwrite the same files
        runs = [
            run.model_copy(update={"output": run.output.model_copy(update={"stem": None})})
            for run in runs
        ]
    logger.info(f"Running {len(runs)} simulations with {jobs} worker(s) into {out_dir}")

    if jobs <= 1:
        outcomes = [run_experiment(run, out_dir, base_dir, monitor) for run in runs]
    else:
        workers = min(jobs, config.max_workers, len(runs))
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=setup_worker_logging,
            initargs=(current_level(),),
        ) as pool:
            futures = [
                pool.submit(
                    _run_payload,
                    run.model_dump_json(),
                    str(out_dir),
                    str(base_dir) if base_dir else None,
                    monitor,
                )
                for run in runs
            ]
            outcomes = [future.result() for future in futures]

    result = SweepResult(out_dir=out_dir, rows=[row for row, _ in outcomes])
    result.summary_path = out_dir / "summary.csv"
    pd.DataFrame(result.rows, columns=SUMMARY_COLUMNS).to_csv(
        result.summary_path, index=False, float_format="%.17g"
    )

    result.violations_path = out_dir / "violations.json"
    violations = {row["stem"]: report for row, report in outcomes if report is not None}
    with open(result.violations_path, "w", encoding="utf-8") as f:
        json.dump(violations, f, indent=2)

    logger.info(
        f"Sweep done: {result.count(STATUS_OK)} ok, {result.count(STATUS_VIOLATIONS)} with "
        f"violations, {result.count(STATUS_ERROR)} errors, "
        f"{result.count(STATUS_CONFIG_ERROR)} config errors"
    )
    return result
