import numpy as np
import pytest

from matconsensus import (
    AsymmetricWeightError,
    Definiteness,
    DimensionMismatchError,
    GraphDimensions,
    IndefiniteWeightError,
    SelfLoopError,
    ZeroWeightError,
    adjacency_matrix,
    degree_matrix,
    laplacian,
    new_graph,
    set_edge,
)
from conftest import LAP_A, LAP_B, LAP_C


def test_dimensions_reject_degenerate_sizes():
    with pytest.raises(DimensionMismatchError):
        GraphDimensions(n=1, d=2)
    with pytest.raises(DimensionMismatchError):
        GraphDimensions(n=3, d=0)
    assert GraphDimensions(n=4, d=2).stacked == 8


def test_set_edge_classifies_and_stores(dims4x2):
    graph = set_edge(new_graph(dims4x2), 0, 1, [[1, 1], [1, 2]])
    assert graph.has_edge(0, 1) and graph.has_edge(1, 0)
    assert graph.weight(1, 0).definiteness is Definiteness.POSITIVE_DEFINITE

    graph = set_edge(graph, 1, 2, [[1, 1], [1, 1]])
    assert graph.weight(1, 2).definiteness is Definiteness.POSITIVE_SEMIDEFINITE
    assert graph.edge_count == 2
    assert sorted(graph.neighbors(1)) == [0, 2]


def test_set_edge_is_functional(dims4x2):
    """set_edge returns a new graph; the original is untouched."""
    empty = new_graph(dims4x2)
    grown = set_edge(empty, 0, 1, np.eye(2))
    assert empty.edge_count == 0
    assert grown.edge_count == 1
    with pytest.raises(ValueError):
        grown.weight(0, 1).entries[0, 0] = 5.0  # stored weights are read-only


def test_set_edge_rejections(dims4x2):
    graph = new_graph(dims4x2)
    with pytest.raises(SelfLoopError):
        set_edge(graph, 2, 2, np.eye(2))
    with pytest.raises(AsymmetricWeightError):
        set_edge(graph, 0, 1, [[1, 0.5], [0, 1]])
    with pytest.raises(IndefiniteWeightError):
        set_edge(graph, 0, 1, [[1, 3], [3, 1]])  # eigenvalues 4 and -2
    with pytest.raises(ZeroWeightError):
        set_edge(graph, 0, 1, np.zeros((2, 2)))
    with pytest.raises(DimensionMismatchError):
        set_edge(graph, 0, 1, np.eye(3))
    with pytest.raises(DimensionMismatchError):
        set_edge(graph, 0, 4, np.eye(2))


def test_set_edge_symmetrizes_rounding_noise(dims4x2):
    noisy = np.array([[1.0, 0.5 + 1e-14], [0.5, 1.0]])
    graph = set_edge(new_graph(dims4x2), 0, 1, noisy)
    stored = graph.weight(0, 1).entries
    assert np.array_equal(stored, stored.T)


def test_degree_blocks(dims4x2, demo_graphs):
    g_line, g_star, g_link = demo_graphs
    assert np.array_equal(degree_matrix(new_graph(dims4x2)), np.zeros((8, 8)))
    # node 4 of the star graph accumulates both incident weights
    deg = degree_matrix(g_star)
    assert np.array_equal(deg[6:8, 6:8], np.diag([2.0, 2.0]))
    # node 2 of the single-link graph carries that link's weight
    deg = degree_matrix(g_link)
    assert np.array_equal(deg[2:4, 2:4], np.array([[1.0, -1.0], [-1.0, 2.0]]))


def test_laplacian_matches_frozen_matrices(demo_graphs):
    """The three demo Laplacians, reproduced entry for entry."""
    for graph, expected in zip(demo_graphs, (LAP_A, LAP_B, LAP_C)):
        assert np.array_equal(laplacian(graph).matrix, expected)


def test_laplacian_is_degree_minus_adjacency(demo_graphs):
    for graph in demo_graphs:
        expected = degree_matrix(graph) - adjacency_matrix(graph)
        assert np.array_equal(laplacian(graph).matrix, expected)


def test_laplacian_block_rows_sum_to_zero(demo_graphs):
    for graph in demo_graphs:
        lap = laplacian(graph)
        n, d = graph.dims.n, graph.dims.d
        for i in range(n):
            row_sum = sum(lap.block(i, j) for j in range(n))
            assert np.allclose(row_sum, 0.0, atol=1e-14)
        # equivalently, states with all nodes equal are annihilated
        same = np.tile(np.arange(1.0, d + 1.0), n)
        assert np.allclose(lap.matrix @ same, 0.0, atol=1e-12)


def test_laplacian_symmetric_psd(rng):
    for _ in range(20):
        dims = GraphDimensions(n=int(rng.integers(2, 6)), d=int(rng.integers(1, 4)))
        from conftest import random_graph

        lap = laplacian(random_graph(rng, dims)).matrix
        assert np.array_equal(lap, lap.T)
        assert np.linalg.eigvalsh(lap).min() > -1e-9
