"""Run traces: one row of metrics per round plus a JSON-ready header."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from ..schema.models import BoundSet, RunHeader, TraceRow, ViolationReport

TRACE_FORMAT = "byzgossip-trace v1"
TRACE_COLUMNS: tuple[str, ...] = tuple(TraceRow.model_fields)


@dataclass
class RunTrace:
    """Per-round metrics of one run; row 0 is the initial state.

    ``pre_var``, ``mse`` and ``mean_shift_sq`` describe the last aggregation step of
    each round (the state fed to it and its output).
    """

    header: RunHeader
    rows: list[TraceRow] = field(default_factory=list)
    bounds: Optional[BoundSet] = None
    violations: Optional[ViolationReport] = None
    final_X: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        if name not in TRACE_COLUMNS:
            raise KeyError(f"Unknown trace column: {name}")
        return np.array([getattr(row, name) for row in self.rows], dtype=np.float64)

    def to_frame(self) -> pd.DataFrame:
        """Rows as a DataFrame with the frozen column order."""
        return pd.DataFrame([row.model_dump() for row in self.rows], columns=list(TRACE_COLUMNS))

    @property
    def monitor_failures(self) -> int:
        """Rounds where an online monitor flag is False."""
        return sum(
            1
            for row in self.rows
            if row.monitored and not (row.ok_alpha and row.ok_lambda and row.ok_error)
        )
