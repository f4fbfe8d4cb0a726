"""Trace storage: CSV rows plus a JSON header per run."""

import json
from dataclasses import dataclass
from pathlib import Path

import pandas as pd
from loguru import logger

from ..engine.trace import TRACE_COLUMNS, TRACE_FORMAT, RunTrace
from ..utils.hashing import file_hash


@dataclass(frozen=True)
class SavedTrace:
    """Where a run landed on disk."""

    csv_path: Path
    header_path: Path
    sha256: str


def trace_to_csv(trace: RunTrace) -> str:
    """Render a trace as CSV text.

    The first line is a ``#`` comment naming the format version and columns; floats
    are written with 17 significant digits so a reread trace is bit-exact.
    """
    df = trace.to_frame()
    body = df.to_csv(index=False, float_format="%.17g", na_rep="nan", lineterminator="\n")
    return f"# {TRACE_FORMAT} columns={','.join(TRACE_COLUMNS)}\n{body}"


def trace_header(trace: RunTrace) -> dict:
    """JSON-ready header: run echo, spectra, bounds and the violation report."""
    document = {"format": TRACE_FORMAT, "header": trace.header.model_dump(mode="json")}
    document["bounds"] = trace.bounds.model_dump(mode="json") if trace.bounds else None
    document["violations"] = (
        trace.violations.model_dump(mode="json") if trace.violations else None
    )
    return document


def save_trace(trace: RunTrace, out_dir: Path, stem: str) -> SavedTrace:
    """Write ``{stem}.csv`` and ``{stem}.json`` under ``out_dir``.

    Args:
        trace: Finished run trace
        out_dir: Output directory (created when missing)
        stem: File stem, usually a run key

    Returns:
        SavedTrace with both paths and the CSV's SHA256
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    header_path = out_dir / f"{stem}.json"

    csv_path.write_text(trace_to_csv(trace), encoding="utf-8")
    digest = file_hash(csv_path)

    document = trace_header(trace)
    document["trace_sha256"] = digest
    with open(header_path, "w", encoding="utf-8") as f:
        json.dump(document, f, indent=2)

    logger.info(f"Saved {len(trace)} trace rows to {csv_path}")
    return SavedTrace(csv_path=csv_path, header_path=header_path, sha256=digest)


def load_trace_frame(csv_path: Path) -> pd.DataFrame:
    """Read a saved trace back into a DataFrame.

    Raises:
        ValueError: If the file does not start with the expected format line
    """
    with open(csv_path, "r", encoding="utf-8") as f:
        first = f.readline()
    if not first.startswith(f"# {TRACE_FORMAT}"):
        raise ValueError(f"{csv_path} is not a {TRACE_FORMAT} file")
    df = pd.read_csv(csv_path, comment="#")
    logger.debug(f"Loaded {len(df)} trace rows from {csv_path}")
    return df
