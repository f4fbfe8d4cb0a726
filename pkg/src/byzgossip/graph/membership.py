"""Membership test for the graph class Gamma(mu_min, b)."""

from ..config import config
from ..schema.models import MembershipReport
from .spectral import spectral_info
from .topology import Topology, honest_subgraph, laplacian


def verify_gamma_membership(t: Topology, mu_min: float, b: int) -> MembershipReport:
    """Check ``mu2(G_H) >= mu_min`` and ``max_i |n_B(i)| <= b``.

    A disconnected honest subgraph has mu2 = 0 and fails for any positive mu_min.
    """
    honest, _ = honest_subgraph(t)
    mu2 = spectral_info(laplacian(honest)).mu2
    max_byz = t.max_byzantine_neighbors()

    failing = []
    if mu2 + config.bound_slack < mu_min:
        failing.append("mu2")
    if max_byz > b:
        failing.append("byzantine_neighbors")

    return MembershipReport(
        member=not failing,
        mu2=mu2,
        mu_min=mu_min,
        b=b,
        max_byzantine_neighbors=max_byz,
        failing=failing,
    )
