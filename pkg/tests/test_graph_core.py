import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from networkx.algorithms.tree.mst import SpanningTreeIterator

from errors import DatasetFormatError, EnumerationLimitError, InvalidGraphError
from modules.graph_core.generators import sbm_generate
from modules.graph_core.io import read_graph_file, read_labels_file, write_graph_file
from modules.graph_core.models import SpanningTree, TreeCover
from modules.graph_core.services import (
    build_graph,
    clique_number_complement,
    connected_components,
    enumerate_spanning_trees,
    kirchhoff_count,
    laplacian,
    main_component,
    min_tree_cover,
    normalized_adjacency,
)
from strategies import connected_graphs, graphs


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


# ----------------------------- build_graph -----------------------------

def test_build_triangle(triangle):
    assert triangle.n == 3
    assert triangle.degrees.tolist() == [2, 2, 2]
    assert np.array_equal(triangle.adjacency, triangle.adjacency.T)
    assert np.all(np.diag(triangle.adjacency) == 0)


def test_build_p2(p2):
    assert p2.degrees.tolist() == [1, 1]
    assert p2.edges == ((0, 1),)


def test_edges_are_canonical():
    g = build_graph(3, [(2, 1), (1, 0)])
    assert g.edges == ((0, 1), (1, 2))


@pytest.mark.parametrize(
    "n, edges, message",
    [
        (3, [(0, 0)], "self-loop"),
        (3, [(0, 3)], "out of range"),
        (3, [(0, 1), (1, 0)], "duplicate edge"),
    ],
)
def test_build_rejects(n, edges, message):
    with pytest.raises(InvalidGraphError, match=message):
        build_graph(n, edges)


@given(graphs())
def test_degrees_match_adjacency_rows(g):
    assert np.array_equal(g.degrees, g.adjacency.sum(axis=1).astype(int))


# ----------------------------- матриці -----------------------------

def test_laplacian_p2(p2):
    assert np.array_equal(laplacian(p2), [[1, -1], [-1, 1]])


def test_laplacian_triangle(triangle):
    expected = 3 * np.eye(3) - np.ones((3, 3))
    assert np.array_equal(laplacian(triangle), expected)


def test_laplacian_empty_graph():
    assert np.array_equal(laplacian(build_graph(3, [])), np.zeros((3, 3)))


@given(graphs())
def test_laplacian_psd_and_zero_row_sums(g):
    lap = laplacian(g)
    assert np.allclose(lap.sum(axis=1), 0.0)
    rng = np.random.default_rng(g.n)
    for _ in range(20):
        x = rng.normal(size=g.n)
        assert x @ lap @ x >= -1e-12


def test_normalized_adjacency_examples(p2, triangle):
    assert np.array_equal(normalized_adjacency(build_graph(1, [])), [[1.0]])
    assert np.allclose(normalized_adjacency(p2), 0.5)
    assert np.allclose(normalized_adjacency(triangle), 1.0 / 3.0)


# ----------------------------- компоненти -----------------------------

def test_main_component_picks_largest():
    g = build_graph(6, [(0, 1), (2, 3), (3, 4)])
    assert connected_components(g) == [[2, 3, 4], [0, 1], [5]]
    sub, nodes = main_component(g)
    assert nodes.tolist() == [2, 3, 4]
    assert sub.edges == ((0, 1), (1, 2))


# ----------------------------- кістякові дерева -----------------------------

def test_triangle_has_three_trees(triangle):
    trees = enumerate_spanning_trees(triangle)
    assert len(trees) == 3
    assert [t.edges for t in trees] == sorted(t.edges for t in trees)


def test_path_has_one_tree(p3):
    trees = enumerate_spanning_trees(p3)
    assert [t.edges for t in trees] == [p3.edges]


def test_k4_exceeds_cap(k4):
    with pytest.raises(EnumerationLimitError, match="exceeds cap") as info:
        enumerate_spanning_trees(k4, cap=10)
    assert info.value.count == 16


def test_disconnected_graph_rejected():
    with pytest.raises(InvalidGraphError, match="graph disconnected"):
        enumerate_spanning_trees(build_graph(3, [(0, 1)]))


@given(connected_graphs(max_n=6))
def test_spanning_trees_match_networkx(g):
    ours = {t.edges for t in enumerate_spanning_trees(g)}
    theirs = {tuple(sorted((min(u, v), max(u, v)) for u, v in t.edges())) for t in SpanningTreeIterator(_nx(g))}
    assert ours == theirs
    assert len(ours) == kirchhoff_count(g)
    for edges in ours:
        assert SpanningTree(g.n, edges).check_host(g) is None


def test_spanning_tree_rejects_cycle():
    with pytest.raises(InvalidGraphError, match="cycle"):
        SpanningTree(4, ((0, 1), (1, 2), (0, 2)))


def test_rooted_tree_meet_and_paths(p3):
    tree = SpanningTree(3, p3.edges).rooted(0)
    assert tree.parent == (-1, 0, 1)
    assert tree.meet(1, 2) == 1
    assert tree.path_from_ancestor(0, 2) == [0, 1, 2]


# ----------------------------- кліки -----------------------------

@pytest.mark.parametrize(
    "n, edges, omega, c1",
    [
        (3, [(0, 1), (1, 2), (0, 2)], 1, 2),
        (3, [(0, 1), (1, 2)], 2, 1),
        (1, [], 1, 0),
    ],
)
def test_clique_number_complement_examples(n, edges, omega, c1):
    assert clique_number_complement(build_graph(n, edges)) == (omega, c1)


@given(graphs(max_n=10))
def test_clique_number_matches_networkx(g):
    omega, c1 = clique_number_complement(g)
    expected = max(len(c) for c in nx.find_cliques(nx.complement(_nx(g))))
    assert omega == expected
    assert c1 == g.n - expected


def test_clique_limit():
    g = build_graph(5, [])
    with pytest.raises(EnumerationLimitError, match="exceeds exact limit"):
        clique_number_complement(g, limit=4)


# ----------------------------- покриття -----------------------------

def test_triangle_cover_has_two_trees(triangle):
    cover = min_tree_cover(triangle, size_cap=3)
    assert len(cover) == 2
    assert cover.covers(triangle)
    _, c1 = clique_number_complement(triangle)
    assert len(cover) == c1


def test_tree_graph_cover_is_itself(p3):
    cover = min_tree_cover(p3, size_cap=3)
    assert len(cover) == 1
    assert cover.trees[0].edges == p3.edges


def test_c4_cover_has_two_trees(c4):
    cover = min_tree_cover(c4, size_cap=3)
    assert len(cover) == 2
    assert cover.covered_edges() == frozenset(c4.edges)


def test_no_cover_within_cap(triangle):
    with pytest.raises(EnumerationLimitError, match="no cover within cap"):
        min_tree_cover(triangle, size_cap=1)


def test_single_node_cover_is_its_own_tree():
    g = build_graph(1, [])
    cover = min_tree_cover(g, size_cap=3)
    assert len(cover) == 1
    assert cover.trees[0].edges == ()
    assert cover.covers(g)


@given(connected_graphs(max_n=5))
def test_cover_union_equals_edges(g):
    cover = min_tree_cover(g, size_cap=g.n)
    assert isinstance(cover, TreeCover)
    assert cover.covers(g)


# ----------------------------- SBM -----------------------------

def test_sbm_degenerate_probabilities():
    g, labels = sbm_generate([5, 5], 1.0, 0.0, seed=3)
    assert g.num_edges == 2 * 10
    assert labels.tolist() == [0] * 5 + [1] * 5
    assert [len(c) for c in connected_components(g)] == [5, 5]


def test_sbm_edge_count_near_expectation():
    g, _ = sbm_generate([50, 50, 50, 50], 0.1, 0.01, seed=7)
    mean = 0.1 * 4 * math.comb(50, 2) + 0.01 * 6 * 2500
    var = 0.1 * 0.9 * 4 * math.comb(50, 2) + 0.01 * 0.99 * 6 * 2500
    assert abs(g.num_edges - mean) <= 4 * math.sqrt(var)


def test_sbm_empty_and_deterministic():
    g, _ = sbm_generate([3], 0.0, 0.0, seed=1)
    assert g.num_edges == 0
    a, _ = sbm_generate([20, 20], 0.3, 0.05, seed=11)
    b, _ = sbm_generate([20, 20], 0.3, 0.05, seed=11)
    assert a == b


def test_sbm_rejects_bad_probabilities():
    with pytest.raises(InvalidGraphError):
        sbm_generate([3, 3], 0.1, 0.5, seed=0)


# ----------------------------- файли -----------------------------

def test_graph_file_round_trip(tmp_path, c4):
    path = tmp_path / "c4.txt"
    write_graph_file(path, c4)
    assert read_graph_file(path) == c4


def test_graph_file_comments_and_errors(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# header comment\n3 2\n0 1\n\n1 x\n", encoding="utf-8")
    with pytest.raises(DatasetFormatError, match=r"g.txt:5"):
        read_graph_file(path)


def test_labels_file_count_checked(tmp_path):
    path = tmp_path / "labels.txt"
    path.write_text("0\n1\n", encoding="utf-8")
    assert read_labels_file(path).tolist() == [0, 1]
    with pytest.raises(DatasetFormatError, match="expected 3 labels"):
        read_labels_file(path, n=3)
