import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import D, complete_graph, gstar_instance, instances, path_graph
from steinerlearn.features import COLUMNS, SCHEMA_VERSION, clustering_coefficients, node_features, path_shares
from steinerlearn.graph import Graph, all_pairs_shortest_paths


def test_triangle_clustering():
    assert clustering_coefficients(complete_graph(3)).tolist() == [1.0, 1.0, 1.0]


def test_path_middle_has_zero_clustering():
    assert clustering_coefficients(path_graph([1, 1])).tolist() == [0.0, 0.0, 0.0]


def test_weighted_clustering_by_direct_summation():
    g = Graph.from_edges(3, [(0, 1, 1), (1, 2, 2), (0, 2, 4)])
    # (1/4 * 2/4 * 4/4)^(1/3) = 0.5 for every node of the single triangle
    np.testing.assert_allclose(clustering_coefficients(g), [0.5, 0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(clustering_coefficients(g, weighted=False), [1.0, 1.0, 1.0])


def test_weighted_equals_unweighted_for_equal_weights():
    rng = np.random.default_rng(0)
    for _ in range(10):
        n = 9
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
        g = Graph.from_edges(n, [(u, v, 7) for u, v in pairs])
        np.testing.assert_allclose(clustering_coefficients(g), clustering_coefficients(g, weighted=False))


def test_gstar_rows():
    fm = node_features(gstar_instance())
    assert fm.columns == COLUMNS and fm.schema == SCHEMA_VERSION
    assert fm.rows.shape == (4, 7)
    d = dict(zip(COLUMNS, fm.rows[D]))
    assert d["terminal"] == 0.0
    assert d["degree"] == 1.0
    assert d["nearest_terminal_dist"] == pytest.approx(3 / 5)
    assert d["mean_terminal_dist"] == pytest.approx(3 / 5)
    # the direct edges (5) beat the detour through D (6)
    assert d["pair_path_share"] == 0.0
    np.testing.assert_array_equal(fm.rows[:, 0], [1, 1, 1, 0])


def test_path_shares_on_a_path():
    g = path_graph([1, 1, 1])
    pair, near = path_shares(all_pairs_shortest_paths(g), [0, 3])
    np.testing.assert_array_equal(pair, [1, 1, 1, 1])
    np.testing.assert_array_equal(near, [1, 1, 1, 1])
    pair, near = path_shares(all_pairs_shortest_paths(g), [0, 1, 3])
    np.testing.assert_allclose(pair, [2 / 3, 1, 2 / 3, 2 / 3])


def test_features_bounded():
    rng = np.random.default_rng(5)
    from conftest import random_instance
    for _ in range(20):
        rows = node_features(random_instance(rng, 12, 4)).rows
        assert rows.min() >= 0 and rows.max() <= 1 + 1e-12


@settings(max_examples=40, deadline=None)
@given(instances(max_n=9), st.randoms(use_true_random=False))
def test_permutation_equivariance(inst, rnd):
    perm = list(range(inst.n))
    rnd.shuffle(perm)
    base = node_features(inst).rows
    moved = node_features(inst.permuted(perm)).rows
    np.testing.assert_allclose(moved[perm], base, atol=1e-12)
