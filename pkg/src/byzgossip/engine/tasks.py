"""Local objectives f_i and their noisy gradient oracle."""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.special import expit

from ..errors import ContractViolationError, InvalidParameterError
from ..schema.models import TaskKind, TaskSpec
from .rng import Purpose, stream


@dataclass(frozen=True)
class Task:
    """Per-honest-node objectives, indexed by ParamMatrix row.

    Quadratic kinds use ``f_i(x) = 0.5 ||x - y_i||^2``. LogisticSynthetic uses an
    L2-regularized logistic loss over each node's samples, labels in {-1, +1}.
    """

    spec: TaskSpec
    targets: Optional[np.ndarray]
    features: tuple[np.ndarray, ...] = ()
    labels: tuple[np.ndarray, ...] = ()
    smoothness: float = 1.0
    heterogeneity: Optional[float] = None

    @property
    def kind(self) -> TaskKind:
        return self.spec.kind

    @property
    def n_nodes(self) -> int:
        if self.targets is not None:
            return int(self.targets.shape[0])
        return len(self.features)

    @property
    def dim(self) -> int:
        return self.spec.dim

    def gradient(self, row: int, x: np.ndarray) -> np.ndarray:
        """Exact gradient of f_row at x."""
        if self.targets is not None:
            return x - self.targets[row]
        A, s = self.features[row], self.labels[row]
        weights = -s * expit(-s * (A @ x))
        return A.T @ weights / A.shape[0] + self.spec.ridge * x

    def loss(self, row: int, x: np.ndarray) -> float:
        if self.targets is not None:
            return 0.5 * float(np.sum((x - self.targets[row]) ** 2))
        A, s = self.features[row], self.labels[row]
        margins = s * (A @ x)
        return float(np.mean(np.logaddexp(0.0, -margins))) + 0.5 * self.spec.ridge * float(x @ x)

    def honest_gradient(self, x: np.ndarray) -> np.ndarray:
        """Gradient of the honest average objective f_H at x."""
        return np.mean([self.gradient(row, x) for row in range(self.n_nodes)], axis=0)

    def honest_grad_norm_sq(self, X: np.ndarray) -> float:
        """Average of ``||grad f_H(x_i)||^2`` over honest rows."""
        if self.targets is not None:
            center = self.targets.mean(axis=0)
            return float(np.mean(np.sum((X - center) ** 2, axis=1)))
        return float(np.mean([np.sum(self.honest_gradient(x) ** 2) for x in X]))

    def initial_point(self, root_seed: int, honest_ids: tuple[int, ...]) -> np.ndarray:
        """Initial ParamMatrix: targets for MeanEstimation, shared point plus jitter otherwise."""
        if self.kind == TaskKind.MEAN_ESTIMATION:
            assert self.targets is not None
            return self.targets.copy()
        X = np.full((self.n_nodes, self.dim), self.spec.init_point, dtype=np.float64)
        if self.spec.init_jitter > 0:
            for row, node in enumerate(honest_ids):
                rng = stream(root_seed, Purpose.INIT, node=node)
                X[row] += self.spec.init_jitter * rng.standard_normal(self.dim)
        return X


def _quadratic_task(
    spec: TaskSpec,
    root_seed: int,
    honest_ids: tuple[int, ...],
    blocks: Optional[tuple[int, ...]] = None,
) -> Task:
    targets = np.empty((len(honest_ids), spec.dim))
    if spec.block_values is not None:
        if blocks is None or len(blocks) != len(honest_ids):
            raise InvalidParameterError("block_values needs one block label per honest node")
        if max(blocks) >= len(spec.block_values):
            raise InvalidParameterError(
                f"block_values has {len(spec.block_values)} entries for {max(blocks) + 1} blocks"
            )
        for row, block in enumerate(blocks):
            targets[row] = spec.block_values[block]
        spread = float(np.mean(np.sum((targets - targets.mean(axis=0)) ** 2, axis=1)))
        return Task(spec=spec, targets=targets, smoothness=1.0, heterogeneity=spread)
    for row, node in enumerate(honest_ids):
        rng = stream(root_seed, Purpose.TASK_DATA, node=node)
        targets[row] = spec.target_center + spec.target_spread * rng.standard_normal(spec.dim)
    # gradients x - y_i differ across nodes by y_i - mean(y)
    spread = float(np.mean(np.sum((targets - targets.mean(axis=0)) ** 2, axis=1)))
    return Task(spec=spec, targets=targets, smoothness=1.0, heterogeneity=spread)


def _logistic_task(spec: TaskSpec, root_seed: int, honest_ids: tuple[int, ...]) -> Task:
    direction = np.ones(spec.dim) / np.sqrt(spec.dim)
    features, labels = [], []
    smoothness = 0.0
    for node in honest_ids:
        rng = stream(root_seed, Purpose.TASK_DATA, node=node)
        proportions = rng.dirichlet([spec.dirichlet_alpha, spec.dirichlet_alpha])
        s = np.where(rng.random(spec.samples_per_node) < proportions[1], 1.0, -1.0)
        centers = np.outer(s, direction) * (spec.class_separation / 2.0)
        A = centers + rng.standard_normal((spec.samples_per_node, spec.dim))
        features.append(A)
        labels.append(s)
        top = float(scipy.linalg.eigvalsh(A.T @ A)[-1])
        smoothness = max(smoothness, top / (4.0 * A.shape[0]) + spec.ridge)

    task = Task(
        spec=spec,
        targets=None,
        features=tuple(features),
        labels=tuple(labels),
        smoothness=smoothness,
    )
    x0 = np.full(spec.dim, spec.init_point)
    grads = np.array([task.gradient(row, x0) for row in range(len(honest_ids))])
    spread = float(np.mean(np.sum((grads - grads.mean(axis=0)) ** 2, axis=1)))
    return replace(task, heterogeneity=spread)


def build_task(
    spec: TaskSpec,
    root_seed: int,
    honest_ids: tuple[int, ...],
    blocks: Optional[tuple[int, ...]] = None,
) -> Task:
    """Materialize per-node data for the honest nodes.

    Data for node i comes from its own stream, so it does not depend on the other
    nodes in the run. ``blocks`` labels honest rows for ``block_values`` targets.
    """
    if not honest_ids:
        raise InvalidParameterError("a task needs at least one honest node")
    if spec.kind == TaskKind.LOGISTIC_SYNTHETIC:
        return _logistic_task(spec, root_seed, honest_ids)
    return _quadratic_task(spec, root_seed, honest_ids, blocks)


def gradient_oracle(task: Task, node: int, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Noisy gradient ``grad f_i(x) + xi`` with isotropic Gaussian xi of coordinate std sigma.

    Args:
        task: Task holding node data
        node: ParamMatrix row of the node
        x: Query point
        rng: Stream scoped to this node and round
    """
    if x.shape != (task.dim,):
        raise ContractViolationError(f"x has shape {x.shape}, expected ({task.dim},)")
    gradient = task.gradient(node, x)
    if task.spec.noise_sigma > 0:
        gradient = gradient + task.spec.noise_sigma * rng.standard_normal(task.dim)
    return gradient
