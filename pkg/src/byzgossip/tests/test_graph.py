"""Tests for topologies, Laplacian spectra, class membership and edge-list files."""

import numpy as np
import pytest
import scipy.linalg
from loguru import logger

from byzgossip.errors import ContractViolationError, SamplingExhaustedError
from byzgossip.graph import (
    EdgeListError,
    Topology,
    attach_byzantine,
    complete_graph,
    format_edgelist,
    honest_subgraph,
    laplacian,
    parse_edgelist,
    random_gamma_graph,
    read_edgelist,
    ring_graph,
    spectral_info,
    three_clique_ghb,
    two_clique_bridge,
    verify_gamma_membership,
    write_edgelist,
)
from byzgossip.verify import predicted_bridge_spectrum


def test_topology_normalizes_edges():
    """Test that (u, v) and (v, u) are the same edge."""
    t = Topology(n=3, edges=[(1, 0), (2, 1)])
    assert t.edges == frozenset({(0, 1), (1, 2)})
    assert t.neighbors(1) == (0, 2)
    assert t.degree(0) == 1


def test_topology_rejects_self_loop_and_range():
    """Test that self-loops and out-of-range ids are refused."""
    with pytest.raises(ValueError):
        Topology(n=3, edges=[(1, 1)])
    with pytest.raises(ValueError):
        Topology(n=2, edges=[(0, 2)])
    with pytest.raises(ValueError):
        Topology(n=2, edges=[(0, 1)], byzantine=frozenset({5}))


def test_neighbor_views(p3_byzantine_end):
    """Test honest/Byzantine neighbor splits."""
    assert p3_byzantine_end.honest_ids() == (0, 1)
    assert p3_byzantine_end.honest_neighbors(1) == (0,)
    assert p3_byzantine_end.byzantine_neighbors(1) == (2,)
    assert p3_byzantine_end.max_byzantine_neighbors() == 1


def test_laplacian_rows_sum_to_zero(bridge_4_2):
    """Test W = D - A structure."""
    W = laplacian(bridge_4_2)
    assert np.allclose(W.sum(axis=1), 0.0)
    assert np.allclose(W, W.T)
    assert W[0, 0] == bridge_4_2.degree(0)


def test_p3_spectrum(p3):
    """Test the path on three nodes: eigenvalues 0, 1, 3."""
    info = spectral_info(laplacian(p3))
    assert info.eigenvalues == pytest.approx([0.0, 1.0, 3.0], abs=1e-12)
    assert info.mu2 == pytest.approx(1.0)
    assert info.mu_max == pytest.approx(3.0)
    assert info.gamma == pytest.approx(1.0 / 3.0)
    assert info.connected


def test_complete_graph_spectrum():
    """Test mu2 = mu_max = n on the complete graph."""
    info = spectral_info(laplacian(complete_graph(26)))
    assert info.mu2 == pytest.approx(26.0)
    assert info.mu_max == pytest.approx(26.0)
    assert info.gamma == pytest.approx(1.0)


def test_fiedler_vector_is_unit_and_orthogonal(bridge_4_2):
    """Test the Fiedler vector invariants."""
    info = spectral_info(laplacian(bridge_4_2))
    assert np.linalg.norm(info.fiedler) == pytest.approx(1.0)
    assert abs(info.fiedler.sum()) < 1e-10
    W = laplacian(bridge_4_2)
    assert np.allclose(W @ info.fiedler, info.mu2 * info.fiedler, atol=1e-10)


def test_fiedler_separates_bridge_cliques(bridge_4_2):
    """Test that the Fiedler sign pattern splits the two cliques."""
    fiedler = spectral_info(laplacian(bridge_4_2)).fiedler
    signs = np.sign(fiedler)
    assert len(set(signs[:4])) == 1
    assert len(set(signs[4:])) == 1
    assert signs[0] != signs[4]


def test_disconnected_graph_reports_zero_mu2():
    """Test that a disconnected graph has kernel dimension 2 and mu2 = 0."""
    info = spectral_info(laplacian(Topology(n=4, edges=[(0, 1), (2, 3)])))
    assert info.kernel_dim == 2
    assert info.mu2 == 0.0
    assert not info.connected
    assert not info.fiedler.any()


def test_single_node_spectrum():
    """Test the one-node graph."""
    info = spectral_info(laplacian(complete_graph(1)))
    assert info.mu2 == 0.0
    assert info.mu_max == 0.0


def test_spectral_info_rejects_asymmetric():
    """Test that a non-symmetric matrix is refused."""
    with pytest.raises(ContractViolationError):
        spectral_info(np.array([[1.0, -1.0], [0.0, 0.0]]))


def test_two_clique_bridge_mu2(bridge_4_2):
    """Test mu2 = 2k for the bridge construction."""
    assert spectral_info(laplacian(bridge_4_2)).mu2 == pytest.approx(4.0, abs=1e-8)
    assert bridge_4_2.blocks == (0,) * 4 + (1,) * 4


def test_ghb_honest_subgraph_is_bridge(ghb_4_2):
    """Test that removing the Byzantine clique leaves two_clique_bridge(4, 2)."""
    honest, remap = honest_subgraph(ghb_4_2)
    assert remap == {i: i for i in range(8)}
    assert honest.edges == two_clique_bridge(4, 2).edges
    assert ghb_4_2.max_byzantine_neighbors() == 2
    assert all(len(ghb_4_2.byzantine_neighbors(i)) == 2 for i in ghb_4_2.honest_ids())


@pytest.mark.parametrize("m", [3, 5, 8])
def test_ghb_honest_mu2_is_2b(m):
    """Test mu2(G_H) = 2b for every b <= m."""
    for b in range(1, m + 1):
        honest, _ = honest_subgraph(three_clique_ghb(m, b))
        assert spectral_info(laplacian(honest)).mu2 == pytest.approx(2.0 * b, abs=1e-8)


@pytest.mark.parametrize("m,k", [(5, 3), (7, 2), (13, 8)])
def test_bridge_spectrum_matches_circulant_formula(m, k):
    """Test the closed-form bridge spectrum against the eigensolver."""
    measured = scipy.linalg.eigvalsh(laplacian(two_clique_bridge(m, k)))
    assert measured == pytest.approx(predicted_bridge_spectrum(m, k), abs=1e-8)


def test_attach_byzantine_gives_exact_count(bridge_4_2):
    """Test that every honest node gets exactly per_node Byzantine neighbors."""
    t = attach_byzantine(bridge_4_2, 3, 2)
    assert t.n == 11
    assert t.byzantine == frozenset({8, 9, 10})
    assert all(len(t.byzantine_neighbors(i)) == 2 for i in t.honest_ids())
    assert t.blocks == (0,) * 4 + (1,) * 4 + (2,) * 3


def test_attach_byzantine_seed_shuffles_assignment(bridge_4_2):
    """Test that a seed changes who sees which Byzantine node but not the counts."""
    unseeded = attach_byzantine(bridge_4_2, 5, 2)
    seeded = attach_byzantine(bridge_4_2, 5, 2, seed=3)
    assert seeded == attach_byzantine(bridge_4_2, 5, 2, seed=3)
    assert seeded.n_edges == unseeded.n_edges
    assert all(len(seeded.byzantine_neighbors(i)) == 2 for i in seeded.honest_ids())
    assert any(attach_byzantine(bridge_4_2, 5, 2, seed=s) != unseeded for s in range(10))


def test_gamma_membership(ghb_4_2):
    """Test membership at and above mu2 = 2b."""
    report = verify_gamma_membership(ghb_4_2, 4.0, 2)
    assert report.member
    assert report.mu2 == pytest.approx(4.0)

    report = verify_gamma_membership(ghb_4_2, 4.5, 2)
    assert not report
    assert report.failing == ["mu2"]

    report = verify_gamma_membership(ghb_4_2, 4.0, 1)
    assert report.failing == ["byzantine_neighbors"]


def test_random_gamma_graph_accepts_member():
    """Test that accepted samples are class members."""
    t = random_gamma_graph(10, 2, 0.9, mu_min=3.0, b=2, seed=1)
    assert verify_gamma_membership(t, 3.0, 2).member
    assert t.byzantine == frozenset({10, 11})


def test_random_gamma_graph_seed_7_regression():
    """Test the pinned seed-7 sample: tries, edges and Byzantine ids."""
    messages = []
    sink = logger.add(lambda message: messages.append(message.record["message"]), level="DEBUG")
    try:
        t = random_gamma_graph(12, 3, 0.6, mu_min=3.0, b=2, seed=7)
    finally:
        logger.remove(sink)
    report = verify_gamma_membership(t, 3.0, 2)
    assert report.member
    assert report.mu2 == pytest.approx(3.472, abs=5e-4)
    assert any(m.startswith("Accepted Gamma sample after 39 tries") for m in messages)
    assert t.n == 15
    assert t.n_edges == 58
    assert t.byzantine == frozenset({12, 13, 14})


def test_random_gamma_graph_impossible_mu_min():
    """Test that an unreachable mu_min fails immediately on the mu2 criterion."""
    with pytest.raises(SamplingExhaustedError) as excinfo:
        random_gamma_graph(5, 1, 0.5, mu_min=6.0, b=1, seed=0)
    assert excinfo.value.criterion == "mu2"


def test_random_gamma_graph_names_failing_criterion():
    """Test that exhaustion reports the most frequent failure."""
    with pytest.raises(SamplingExhaustedError) as excinfo:
        random_gamma_graph(6, 4, 1.0, mu_min=1.0, b=1, seed=0, retry_budget=5)
    assert excinfo.value.criterion == "byzantine_neighbors"


def test_parse_edgelist_headers():
    """Test header parsing and comments."""
    text = "# triangle\nn: 4\nbyzantine: 3\nblocks: 0,0,1,1\n0 1\n1 2  # inline\n2 3\n"
    t = parse_edgelist(text)
    assert t.n == 4
    assert t.byzantine == frozenset({3})
    assert t.blocks == (0, 0, 1, 1)
    assert t.n_edges == 3


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("0 1\n1 1\n", "g.txt:2: self-loop"),
        ("0 1\n0 1 2\n", "g.txt:2: expected"),
        ("0 1\n1 0\n", "g.txt:2: duplicate"),
        ("colour: red\n", "g.txt:1: unknown header"),
        ("0 x\n", "g.txt:1: node ids must be integers"),
    ],
)
def test_parse_edgelist_errors_name_line(text, fragment):
    """Test that parse errors carry the source and line number."""
    with pytest.raises(EdgeListError) as excinfo:
        parse_edgelist(text, source="g.txt")
    assert fragment in str(excinfo.value)


def test_edgelist_file_roundtrip(tmp_path, ghb_4_2):
    """Test that a written topology reads back unchanged."""
    path = write_edgelist(ghb_4_2, tmp_path / "ghb.txt")
    assert read_edgelist(path) == ghb_4_2
    assert format_edgelist(ghb_4_2).splitlines()[0] == "n: 12"


def test_ring_graph_needs_three_nodes():
    """Test the ring size check."""
    assert ring_graph(5).n_edges == 5
    with pytest.raises(ValueError):
        ring_graph(2)
