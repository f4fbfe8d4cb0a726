"""Experiment files: strict JSON loading, topology construction and sweep expansion."""

import itertools
import json
from pathlib import Path
from typing import Any, Callable, Optional

from loguru import logger
from pydantic import ValidationError

from ..aggregate.rule_config import build_rule_config
from ..config import config
from ..engine.run import RunConfig
from ..errors import ByzGossipError, ConfigError
from ..graph import generators
from ..graph.io import read_edgelist
from ..graph.topology import Topology
from ..schema.models import ExperimentFile, SweepSpec, TopologySpec

GENERATOR_PARAMS: dict[str, tuple[str, ...]] = {
    "complete": ("n",),
    "path": ("n",),
    "ring": ("n",),
    "two_clique_bridge": ("m", "k"),
    "three_clique_ghb": ("m", "b"),
    "erdos_renyi": ("n", "p", "seed"),
    "random_gamma": ("n_honest", "n_byz", "edge_prob", "mu_min", "b", "seed"),
}

_GENERATORS: dict[str, Callable[..., Topology]] = {
    "complete": generators.complete_graph,
    "path": generators.path_graph,
    "ring": generators.ring_graph,
    "two_clique_bridge": generators.two_clique_bridge,
    "three_clique_ghb": generators.three_clique_ghb,
    "erdos_renyi": generators.erdos_renyi,
    "random_gamma": generators.random_gamma_graph,
}

_INT_PARAMS = {"n", "m", "k", "b", "seed", "n_honest", "n_byz"}


def load_experiment(path: Path) -> ExperimentFile:
    """Parse a JSON experiment file; unknown keys are rejected.

    Raises:
        ConfigError: If the file is missing, not JSON, or fails validation
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Experiment file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    try:
        experiment = ExperimentFile.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"{path}: {e}") from e
    logger.info(f"Loaded experiment '{experiment.name}' from {path}")
    return experiment


def _generator_kwargs(spec: TopologySpec) -> dict[str, Any]:
    assert spec.generator is not None
    allowed = GENERATOR_PARAMS[spec.generator]
    unknown = sorted(set(spec.params) - set(allowed))
    if unknown:
        raise ConfigError(f"{spec.generator}: unknown parameters {unknown}")
    kwargs: dict[str, Any] = {}
    for key, value in spec.params.items():
        if key in _INT_PARAMS:
            if float(value) != int(value):
                raise ConfigError(f"{spec.generator}: parameter '{key}' must be an integer")
            value = int(value)
        kwargs[key] = value
    return kwargs


def build_topology(
    spec: TopologySpec, base_dir: Optional[Path] = None, seed: int = 0
) -> Topology:
    """Materialize the topology an experiment describes.

    Edge-list paths are resolved against ``base_dir`` first, then ``config.graphs_dir``.
    ``byzantine_per_node`` attaches a Byzantine clique of ``n_byzantine`` nodes
    (default ``byzantine_per_node``) after the generated graph.

    Raises:
        ConfigError: On unknown or invalid generator parameters, or a bad graph file
    """
    try:
        if spec.file is not None:
            path = Path(spec.file)
            if not path.is_absolute():
                candidates = [base_dir / path] if base_dir is not None else []
                candidates.append(config.graphs_dir / path)
                path = next((c for c in candidates if c.exists()), candidates[0])
            topology = read_edgelist(path)
        else:
            kwargs = _generator_kwargs(spec)
            if spec.generator in ("erdos_renyi", "random_gamma"):
                kwargs.setdefault("seed", seed)
            topology = _GENERATORS[spec.generator](**kwargs)

        if spec.byzantine_per_node is not None:
            n_byz = spec.n_byzantine or max(spec.byzantine_per_node, 1)
            topology = generators.attach_byzantine(topology, n_byz, spec.byzantine_per_node)
        elif spec.n_byzantine is not None:
            raise ConfigError("n_byzantine needs byzantine_per_node")
    except ConfigError:
        raise
    except (ByzGossipError, TypeError) as e:
        raise ConfigError(f"topology: {e}") from e

    logger.debug(
        f"Built topology: n={topology.n}, m={topology.n_edges}, |B|={len(topology.byzantine)}"
    )
    return topology


def expand_sweep(experiment: ExperimentFile) -> list[ExperimentFile]:
    """Cartesian product of the sweep axes in the order rule, attack, b, seed.

    Each expanded entry has an empty sweep; an experiment without axes expands to
    itself.
    """
    axes = experiment.sweep.axes()
    if not axes:
        return [experiment]
    names = [name for name, _ in axes]
    expanded = []
    for values in itertools.product(*(values for _, values in axes)):
        update: dict[str, Any] = {"sweep": SweepSpec()}
        for name, value in zip(names, values):
            if name == "attack":
                update["attack"] = experiment.attack.model_copy(update={"kind": value})
            else:
                update[name] = value
        expanded.append(experiment.model_copy(update=update))
    logger.info(f"Expanded '{experiment.name}' into {len(expanded)} runs over {names}")
    return expanded


def build_run_config(
    experiment: ExperimentFile,
    topology: Optional[Topology] = None,
    base_dir: Optional[Path] = None,
    monitor: Optional[bool] = None,
) -> RunConfig:
    """Turn one expanded experiment into a RunConfig.

    Raises:
        ConfigError: On any inconsistency between the experiment and its topology
    """
    if topology is None:
        topology = build_topology(experiment.topology, base_dir, seed=experiment.seed)
    rule_cfg = build_rule_config(
        experiment.rule,
        experiment.b,
        topology,
        eta=experiment.eta,
        allow_large_eta=experiment.allow_large_eta,
        nna_local_step=experiment.nna_local_step,
    )
    try:
        return RunConfig(
            name=experiment.name,
            mode=experiment.mode,
            topology=topology,
            rule_cfg=rule_cfg,
            attack=experiment.attack,
            task=experiment.task,
            rho=experiment.rho,
            beta=experiment.beta,
            T=experiment.T,
            comm_rounds_per_step=experiment.comm_rounds_per_step,
            seed=experiment.seed,
            monitor=experiment.monitor if monitor is None else monitor,
        )
    except ValidationError as e:
        raise ConfigError(f"{experiment.name}: {e}") from e
