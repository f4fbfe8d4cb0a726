"""Configuration management for byzgossip."""

import os
from pathlib import Path

from pydantic import BaseModel, Field

_PROJECT_ROOT = Path(__file__).parent.parent.parent


def _default_out_dir() -> Path:
    env = os.environ.get("BYZGOSSIP_OUT")
    return Path(env) if env else Path.cwd() / "runs"


class Config(BaseModel):
    """Global configuration for byzgossip simulations."""

    # Project paths
    project_root: Path = Field(default_factory=lambda: _PROJECT_ROOT)
    data_dir: Path = Field(default_factory=lambda: _PROJECT_ROOT / "data")

    # Data subdirectories
    seeds_dir: Path = Field(default_factory=lambda: _PROJECT_ROOT / "data" / "seeds")
    graphs_dir: Path = Field(default_factory=lambda: _PROJECT_ROOT / "data" / "graphs")
    experiments_dir: Path = Field(default_factory=lambda: _PROJECT_ROOT / "data" / "experiments")
    out_dir: Path = Field(default_factory=_default_out_dir)

    # Numerical tolerances
    eig_tol: float = 1e-12
    kernel_tol: float = 1e-8
    fiedler_tol: float = 1e-10
    bound_slack: float = 1e-9

    # Attack scaling search
    zeta_grid: list[float] = Field(default_factory=lambda: [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0])
    zeta_eps: float = 1e-12

    # Sampling
    gamma_retry_budget: int = 1000

    # Execution
    max_workers: int = 4

    def ensure_out_dir(self, out_dir: Path | None = None) -> Path:
        """Create and return the output directory."""
        target = out_dir or self.out_dir
        target.mkdir(parents=True, exist_ok=True)
        return target


# Global config instance
config = Config()
