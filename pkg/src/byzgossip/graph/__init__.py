"""Communication topologies, Laplacians and spectra."""

from .generators import (
    attach_byzantine,
    attach_byzantine_random,
    complete_graph,
    erdos_renyi,
    path_graph,
    random_gamma_graph,
    ring_graph,
    three_clique_ghb,
    two_clique_bridge,
    with_byzantine,
)
from .io import EdgeListError, format_edgelist, parse_edgelist, read_edgelist, write_edgelist
from .membership import verify_gamma_membership
from .spectral import SpectralInfo, spectral_info
from .topology import Topology, honest_subgraph, laplacian

__all__ = [
    "EdgeListError",
    "SpectralInfo",
    "Topology",
    "attach_byzantine",
    "attach_byzantine_random",
    "complete_graph",
    "erdos_renyi",
    "format_edgelist",
    "honest_subgraph",
    "laplacian",
    "parse_edgelist",
    "path_graph",
    "random_gamma_graph",
    "read_edgelist",
    "ring_graph",
    "spectral_info",
    "three_clique_ghb",
    "two_clique_bridge",
    "verify_gamma_membership",
    "with_byzantine",
    "write_edgelist",
]
