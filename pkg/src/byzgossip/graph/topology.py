"""Undirected communication topologies with honest/Byzantine labels."""

from typing import Any, Optional

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator


class Topology(BaseModel):
    """Undirected graph on nodes ``0..n-1`` with a Byzantine subset.

    Edges are stored as sorted pairs, so ``(1, 0)`` and ``(0, 1)`` are the same edge.
    ``blocks`` optionally labels each node with a cluster index (clique constructors
    set it; the TwoWorld attack reads it).
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=0, description="Node count")
    edges: frozenset[tuple[int, int]] = Field(default_factory=frozenset)
    byzantine: frozenset[int] = Field(default_factory=frozenset)
    blocks: Optional[tuple[int, ...]] = None

    _neighbors: tuple[tuple[int, ...], ...] = PrivateAttr(default=())

    @field_validator("edges", mode="before")
    @classmethod
    def _normalize_edges(cls, value: Any) -> frozenset[tuple[int, int]]:
        normalized = set()
        for u, v in value:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            normalized.add((min(u, v), max(u, v)))
        return frozenset(normalized)

    @model_validator(mode="after")
    def _check_ranges(self) -> "Topology":
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside [0, {self.n})")
        for node in self.byzantine:
            if not 0 <= node < self.n:
                raise ValueError(f"byzantine node {node} outside [0, {self.n})")
        if self.blocks is not None and len(self.blocks) != self.n:
            raise ValueError(f"blocks has {len(self.blocks)} labels for {self.n} nodes")
        return self

    def model_post_init(self, __context: Any) -> None:
        adjacency: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
        self._neighbors = tuple(tuple(sorted(row)) for row in adjacency)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Neighbors of node i, sorted by id."""
        return self._neighbors[i]

    def degree(self, i: int) -> int:
        return len(self._neighbors[i])

    def is_byzantine(self, i: int) -> bool:
        return i in self.byzantine

    def honest_ids(self) -> tuple[int, ...]:
        """Honest node ids in increasing order (the ParamMatrix row order)."""
        return tuple(i for i in range(self.n) if i not in self.byzantine)

    def honest_neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in self._neighbors[i] if j not in self.byzantine)

    def byzantine_neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in self._neighbors[i] if j in self.byzantine)

    def max_byzantine_neighbors(self) -> int:
        """Largest Byzantine neighbor count over honest nodes (0 when none are honest)."""
        counts = [len(self.byzantine_neighbors(i)) for i in self.honest_ids()]
        return max(counts, default=0)

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix as float64."""
        matrix = np.zeros((self.n, self.n), dtype=np.float64)
        for u, v in self.edges:
            matrix[u, v] = 1.0
            matrix[v, u] = 1.0
        return matrix

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(sorted(self.edges))
        return graph

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        return nx.is_connected(self.to_networkx())


def honest_subgraph(t: Topology) -> tuple[Topology, dict[int, int]]:
    """Induced subgraph on honest nodes.

    Args:
        t: Source topology

    Returns:
        Tuple of (honest topology with no Byzantine nodes, old id -> new id map)
    """
    honest = t.honest_ids()
    remap = {old: new for new, old in enumerate(honest)}
    edges = {(remap[u], remap[v]) for u, v in t.edges if u in remap and v in remap}
    blocks = tuple(t.blocks[old] for old in honest) if t.blocks is not None else None
    return Topology(n=len(honest), edges=edges, blocks=blocks), remap


def laplacian(t: Topology) -> np.ndarray:
    """Graph Laplacian ``W = D - A`` with integer-valued float64 entries."""
    adjacency = t.adjacency()
    return np.diag(adjacency.sum(axis=1)) - adjacency
