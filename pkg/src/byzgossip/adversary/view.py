"""Ground-truth state handed to the adversary each round."""

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..errors import ContractViolationError, UndefinedFiedlerError
from ..graph.spectral import SpectralInfo, spectral_info
from ..graph.topology import Topology, honest_subgraph, laplacian
from ..utils.hashing import array_checksum


@dataclass(frozen=True)
class HonestContext:
    """Graph-derived quantities that stay fixed for a whole run."""

    topology: Topology
    honest: Topology
    row_of: Mapping[int, int]
    W: np.ndarray
    spectral: SpectralInfo

    @classmethod
    def from_topology(cls, topology: Topology) -> "HonestContext":
        honest, row_of = honest_subgraph(topology)
        W = laplacian(honest)
        return cls(topology=topology, honest=honest, row_of=row_of, W=W, spectral=spectral_info(W))

    @property
    def honest_labels(self) -> frozenset[int]:
        return frozenset(self.row_of)

    def partition(self) -> np.ndarray:
        """Block label per honest row.

        Uses the topology's block labels when present, otherwise the sign pattern of
        the honest Fiedler vector.
        """
        if self.honest.blocks is not None:
            return np.asarray(self.honest.blocks)
        if self.spectral.mu2 <= 0:
            raise UndefinedFiedlerError("honest subgraph is disconnected; no Fiedler partition")
        return (self.spectral.fiedler >= 0).astype(int)


@dataclass(frozen=True)
class OmniscientView:
    """Read-only snapshot of the honest state plus the graph context.

    ``X`` is a non-writeable copy; ``checksum`` lets callers assert it was not mutated.
    """

    X: np.ndarray
    mean: np.ndarray
    context: HonestContext
    eta: float
    checksum: str

    @classmethod
    def build(cls, X: np.ndarray, context: HonestContext, eta: float) -> "OmniscientView":
        snapshot = np.array(X, dtype=np.float64, copy=True)
        if snapshot.ndim != 2 or snapshot.shape[0] != context.honest.n:
            raise ContractViolationError(
                f"X has shape {snapshot.shape} for {context.honest.n} honest nodes"
            )
        snapshot.setflags(write=False)
        mean = snapshot.mean(axis=0) if snapshot.shape[0] else np.zeros(snapshot.shape[1])
        mean.setflags(write=False)
        return cls(
            X=snapshot, mean=mean, context=context, eta=eta, checksum=array_checksum(snapshot)
        )

    @property
    def W(self) -> np.ndarray:
        return self.context.W

    @property
    def topology(self) -> Topology:
        return self.context.topology

    @property
    def fiedler(self) -> np.ndarray:
        return self.context.spectral.fiedler

    def unchanged(self) -> bool:
        return array_checksum(self.X) == self.checksum
