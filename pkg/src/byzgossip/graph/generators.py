"""Topology constructors, including the breakdown constructions and random class samples."""

from collections import Counter
from typing import Iterable, Optional

import networkx as nx
import numpy as np
from loguru import logger

from ..config import config
from ..errors import InvalidParameterError, SamplingExhaustedError
from .membership import verify_gamma_membership
from .topology import Topology


def _clique_edges(nodes: range) -> set[tuple[int, int]]:
    return {(u, v) for u in nodes for v in nodes if u < v}


def _circular_links(source: range, target: range, k: int) -> set[tuple[int, int]]:
    """Node j of ``source`` links to nodes j..j+k-1 (mod size) of ``target``."""
    m = len(target)
    return {(source[j], target[(j + q) % m]) for j in range(len(source)) for q in range(k)}


def complete_graph(n: int) -> Topology:
    """Complete graph on n honest nodes."""
    if n < 1:
        raise InvalidParameterError(f"complete_graph needs n >= 1, got {n}")
    return Topology(n=n, edges=_clique_edges(range(n)))


def path_graph(n: int) -> Topology:
    if n < 1:
        raise InvalidParameterError(f"path_graph needs n >= 1, got {n}")
    return Topology(n=n, edges={(i, i + 1) for i in range(n - 1)})


def ring_graph(n: int) -> Topology:
    if n < 3:
        raise InvalidParameterError(f"ring_graph needs n >= 3, got {n}")
    return Topology(n=n, edges={(i, (i + 1) % n) for i in range(n)})


def two_clique_bridge(m: int, k: int) -> Topology:
    """Two m-cliques joined by k circular cross-links per node.

    Args:
        m: Clique size
        k: Cross-links per node, 1 <= k <= m

    Returns:
        Honest topology on 2m nodes with block labels 0 and 1
    """
    if m < 1 or not 1 <= k <= m:
        raise InvalidParameterError(f"two_clique_bridge needs 1 <= k <= m, got m={m}, k={k}")
    c1, c2 = range(0, m), range(m, 2 * m)
    edges = _clique_edges(c1) | _clique_edges(c2) | _circular_links(c1, c2, k)
    return Topology(n=2 * m, edges=edges, blocks=(0,) * m + (1,) * m)


def three_clique_ghb(m: int, b: int) -> Topology:
    """Three m-cliques pairwise joined by b circular links per node; the third is Byzantine.

    The honest subgraph is ``two_clique_bridge(m, b)`` with the same labels, and every
    honest node has exactly b Byzantine neighbors.
    """
    if m < 1 or not 1 <= b <= m:
        raise InvalidParameterError(f"three_clique_ghb needs 1 <= b <= m, got m={m}, b={b}")
    cliques = [range(0, m), range(m, 2 * m), range(2 * m, 3 * m)]
    edges: set[tuple[int, int]] = set()
    for clique in cliques:
        edges |= _clique_edges(clique)
    for a, c in ((0, 1), (1, 2), (2, 0)):
        edges |= _circular_links(cliques[a], cliques[c], b)
    return Topology(
        n=3 * m,
        edges=edges,
        byzantine=frozenset(cliques[2]),
        blocks=(0,) * m + (1,) * m + (2,) * m,
    )


def erdos_renyi(n: int, p: float, seed: Optional[int] = None) -> Topology:
    """G(n, p) sample on honest nodes via networkx."""
    if n < 1:
        raise InvalidParameterError(f"erdos_renyi needs n >= 1, got {n}")
    if not 0.0 < p <= 1.0:
        raise InvalidParameterError(f"edge probability must be in (0, 1], got {p}")
    graph = nx.gnp_random_graph(n, p, seed=seed)
    return Topology(n=n, edges=graph.edges())


def with_byzantine(t: Topology, nodes: Iterable[int]) -> Topology:
    """Copy of t with the given nodes marked Byzantine."""
    return Topology(n=t.n, edges=t.edges, byzantine=frozenset(nodes), blocks=t.blocks)


def attach_byzantine(
    t: Topology, n_byz: int, per_node: int, seed: Optional[int] = None
) -> Topology:
    """Append a Byzantine clique giving every honest node ``per_node`` Byzantine neighbors.

    Honest node number j links to Byzantine nodes ``j..j+per_node-1 (mod n_byz)``.
    Without a seed j is the position in honest order; a seed shuffles that order
    first, so which Byzantine nodes a given honest node sees changes but every
    honest node still gets exactly ``per_node``.
    """
    if n_byz < 1:
        raise InvalidParameterError(f"n_byz must be >= 1, got {n_byz}")
    if not 0 <= per_node <= n_byz:
        raise InvalidParameterError(f"per_node must be in [0, {n_byz}], got {per_node}")
    honest = list(t.honest_ids())
    if seed is not None:
        honest = [honest[i] for i in np.random.default_rng(seed).permutation(len(honest))]
    byz = range(t.n, t.n + n_byz)
    edges = set(t.edges) | _clique_edges(byz)
    for j, node in enumerate(honest):
        for q in range(per_node):
            edges.add((node, byz[(j + q) % n_byz]))
    blocks = None
    if t.blocks is not None:
        blocks = t.blocks + (max(t.blocks, default=-1) + 1,) * n_byz
    return Topology(
        n=t.n + n_byz,
        edges=edges,
        byzantine=t.byzantine | frozenset(byz),
        blocks=blocks,
    )


def attach_byzantine_random(
    t: Topology, n_byz: int, b: int, rng: np.random.Generator
) -> Topology:
    """Append n_byz Byzantine nodes, each honest node linked to between 0 and b of them."""
    if n_byz < 1:
        raise InvalidParameterError(f"n_byz must be >= 1, got {n_byz}")
    honest = t.honest_ids()
    byz = np.arange(t.n, t.n + n_byz)
    edges = set(t.edges)
    cap = min(b, n_byz)
    for node in honest:
        count = int(rng.integers(0, cap + 1))
        for target in rng.choice(byz, size=count, replace=False):
            edges.add((node, int(target)))
    return Topology(n=t.n + n_byz, edges=edges, byzantine=t.byzantine | frozenset(byz.tolist()))


def random_gamma_graph(
    n_honest: int,
    n_byz: int,
    edge_prob: float,
    mu_min: float,
    b: int,
    seed: Optional[int] = None,
    retry_budget: Optional[int] = None,
) -> Topology:
    """Rejection-sample a random graph in the class Gamma(mu_min, b).

    Honest edges follow G(n_honest, edge_prob). Each Byzantine node links to each
    honest node with probability ``edge_prob`` and to the other Byzantine nodes
    with the same probability.

    Args:
        n_honest: Honest node count
        n_byz: Byzantine node count (appended after the honest ids)
        edge_prob: Edge probability in (0, 1]
        mu_min: Required algebraic connectivity of the honest subgraph
        b: Maximum Byzantine neighbors per honest node
        seed: Seed for the sampling stream
        retry_budget: Number of samples to try (default ``config.gamma_retry_budget``)

    Returns:
        The first sample that passes ``verify_gamma_membership``

    Raises:
        SamplingExhaustedError: If no sample passed; ``criterion`` names the constraint
            that failed most often
    """
    if n_honest < 1 or n_byz < 0:
        raise InvalidParameterError(f"invalid population: n_honest={n_honest}, n_byz={n_byz}")
    if not 0.0 < edge_prob <= 1.0:
        raise InvalidParameterError(f"edge probability must be in (0, 1], got {edge_prob}")
    if mu_min > n_honest:
        # mu2 of any graph on n_honest nodes is at most n_honest
        raise SamplingExhaustedError(
            f"mu_min={mu_min} exceeds the largest possible mu2 ({n_honest})", criterion="mu2"
        )

    budget = retry_budget if retry_budget is not None else config.gamma_retry_budget
    rng = np.random.default_rng(seed)
    failures: Counter[str] = Counter()
    n = n_honest + n_byz

    for attempt in range(budget):
        honest = nx.gnp_random_graph(n_honest, edge_prob, seed=int(rng.integers(2**32)))
        edges = set(honest.edges())
        for u in range(n_honest, n):
            for v in range(n):
                if v != u and (v < n_honest or v > u) and rng.random() < edge_prob:
                    edges.add((v, u))
        candidate = Topology(n=n, edges=edges, byzantine=frozenset(range(n_honest, n)))
        report = verify_gamma_membership(candidate, mu_min, b)
        if report.member:
            logger.debug(f"Accepted Gamma sample after {attempt + 1} tries (mu2={report.mu2:.4g})")
            return candidate
        failures.update(report.failing)

    criterion = failures.most_common(1)[0][0] if failures else "mu2"
    raise SamplingExhaustedError(
        f"no Gamma({mu_min}, {b}) sample in {budget} tries (failures: {dict(failures)})",
        criterion=criterion,
    )
