import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A, B, C, D, complete_graph, connected_graphs, gstar_graph, path_graph, star_graph
from steinerlearn.graph import (
    DisconnectedGraphError,
    Graph,
    GraphError,
    STPInstance,
    SteinerTree,
    all_pairs_shortest_paths,
    graph_stats,
    induced_subgraph,
    is_connected,
    minimum_spanning_tree,
    prune_nonterminal_leaves,
    shortest_paths,
)


def brute_force_distances(g: Graph) -> np.ndarray:
    """Minimum over every simple path, found by exhaustive DFS."""
    best = np.full((g.n, g.n), np.inf)
    adj = g.adjacency

    def walk(src, node, cost, seen):
        best[src, node] = min(best[src, node], cost)
        for v, w in adj[node]:
            if v not in seen:
                walk(src, v, cost + w, seen | {v})

    for s in range(g.n):
        walk(s, s, 0, {s})
    return best


def brute_force_mst_cost(g: Graph) -> int:
    best = None
    for subset in itertools.combinations(g.edges, g.n - 1):
        t = Graph.from_edges(g.n, subset)
        if is_connected(t):
            cost = sum(w for _, _, w in subset)
            best = cost if best is None else min(best, cost)
    return best


def test_graph_rejects_bad_input():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 0, 1)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 1, 1), (1, 0, 2)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 1, 0)])
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 2, 1)])


def test_adjacency_is_symmetric():
    g = gstar_graph()
    for u in range(g.n):
        for v, w in g.adjacency[u]:
            assert (u, w) in g.adjacency[v]


def test_instance_validation():
    g = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(DisconnectedGraphError):
        STPInstance(g, (0, 1))
    with pytest.raises(GraphError):
        STPInstance(gstar_graph(), (0,))
    with pytest.raises(GraphError):
        STPInstance(gstar_graph(), (0, 9))


def test_shortest_paths_examples():
    assert shortest_paths(complete_graph(3), 0)[0] == [0, 1, 1]
    assert shortest_paths(path_graph([2, 3]), 0)[0] == [0, 2, 5]
    dist, pred = shortest_paths(gstar_graph(), A)
    assert dist[B] == 5
    assert pred[A] == -1 and pred[B] == A


def test_shortest_paths_disconnected():
    with pytest.raises(DisconnectedGraphError):
        shortest_paths(Graph.from_edges(3, [(0, 1)]), 0)
    with pytest.raises(DisconnectedGraphError):
        all_pairs_shortest_paths(Graph.from_edges(3, [(0, 1)]))


def test_all_pairs_examples():
    assert (all_pairs_shortest_paths(complete_graph(3)) == 1 - np.eye(3)).all()
    d = all_pairs_shortest_paths(gstar_graph())
    assert d[A, B] == d[A, C] == d[B, C] == 5
    assert d[A, D] == d[B, D] == d[C, D] == 3
    s = all_pairs_shortest_paths(star_graph(3))
    assert s[1, 2] == s[1, 3] == s[2, 3] == 2
    assert (s[0, 1:] == 1).all()


def test_all_pairs_gstar_matches_path_enumeration():
    g = gstar_graph()
    np.testing.assert_array_equal(all_pairs_shortest_paths(g), brute_force_distances(g))


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=7))
def test_all_pairs_matches_enumeration(g):
    np.testing.assert_array_equal(all_pairs_shortest_paths(g), brute_force_distances(g))


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=9))
def test_triangle_inequality_and_symmetry(g):
    d = all_pairs_shortest_paths(g)
    assert (d == d.T).all() and (np.diag(d) == 0).all()
    assert (d[:, None, :] <= d[:, :, None] + d[None, :, :]).all()


def test_mst_examples():
    tri = Graph.from_edges(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)])
    assert minimum_spanning_tree(tri).cost == 3
    mst = minimum_spanning_tree(gstar_graph())
    assert mst.cost == 9
    assert mst.pairs == {(A, D), (B, D), (C, D)}
    tree = path_graph([4, 1, 7])
    assert minimum_spanning_tree(tree).edges == tree.edges


def test_mst_gstar_matches_enumeration():
    assert brute_force_mst_cost(gstar_graph()) == 9


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=7))
def test_mst_matches_enumeration(g):
    mst = minimum_spanning_tree(g)
    assert len(mst.edges) == g.n - 1
    assert mst.cost == brute_force_mst_cost(g)


def test_mst_tie_break_is_lexicographic():
    mst = minimum_spanning_tree(complete_graph(4))
    assert mst.pairs == {(0, 1), (0, 2), (0, 3)}


def test_mst_disconnected():
    with pytest.raises(DisconnectedGraphError):
        minimum_spanning_tree(Graph.from_edges(3, [(0, 1)]))


def test_induced_subgraph_examples():
    sub, mapping = induced_subgraph(gstar_graph(), [A, B, C])
    assert mapping == (A, B, C)
    assert sub.edges == ((0, 1, 5), (0, 2, 5), (1, 2, 5))
    full, mapping = induced_subgraph(gstar_graph(), range(4))
    assert full == gstar_graph() and mapping == (0, 1, 2, 3)
    two, _ = induced_subgraph(path_graph([1, 1]), [0, 2])
    assert two.n == 2 and two.m == 0
    with pytest.raises(GraphError):
        induced_subgraph(gstar_graph(), [])


def test_induced_subgraph_remaps_ids():
    g = path_graph([1, 2, 3, 4])
    sub, mapping = induced_subgraph(g, [4, 3, 1])
    assert mapping == (1, 3, 4)
    assert [(mapping[u], mapping[v], w) for u, v, w in sub.edges] == [(3, 4, 4)]


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=8))
def test_induced_full_set_roundtrip(g):
    sub, mapping = induced_subgraph(g, range(g.n))
    assert tuple((mapping[u], mapping[v], w) for u, v, w in sub.edges) == g.edges


def test_is_connected_examples():
    g = gstar_graph()
    assert is_connected(g, [A, B])
    assert not is_connected(Graph.from_edges(2, []))
    assert is_connected(g)
    assert not is_connected(path_graph([1, 1, 1]), [0, 3])


def test_prune_examples():
    # path T1 - s - T2 with a pendant s - x
    tree = SteinerTree(((0, 1, 1), (1, 2, 1), (1, 3, 1)))
    pruned = prune_nonterminal_leaves(tree, [0, 2])
    assert pruned.pairs == {(0, 1), (1, 2)}
    leaves_are_terminals = SteinerTree(((0, 1, 1), (1, 2, 1)))
    assert prune_nonterminal_leaves(leaves_are_terminals, [0, 2]) == leaves_are_terminals
    # chain 0 - 1 - 2 spans terminals 0 and 2; the chain 2 - 3 - 4 hangs off it
    chain = SteinerTree(((0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)))
    assert prune_nonterminal_leaves(chain, [0, 2]).pairs == {(0, 1), (1, 2)}


def test_prune_rejects_non_tree():
    cycle = SteinerTree(((0, 1, 1), (1, 2, 1), (0, 2, 1)))
    with pytest.raises(GraphError):
        prune_nonterminal_leaves(cycle, [0, 1])


@settings(max_examples=60, deadline=None)
@given(connected_graphs(min_n=3, max_n=9), st.data())
def test_prune_idempotent_and_monotone(g, data):
    tree = minimum_spanning_tree(g)
    terms = data.draw(st.sets(st.integers(0, g.n - 1), min_size=2, max_size=g.n))
    once = prune_nonterminal_leaves(tree, terms)
    assert prune_nonterminal_leaves(once, terms) == once
    assert once.cost <= tree.cost
    assert set(terms) <= once.nodes
    assert all(v in terms or sum(v in (a, b) for a, b, _ in once.edges) > 1 for v in once.nodes)


def test_graph_stats_examples():
    assert graph_stats(complete_graph(4)) == (1.0, 1)
    density, radius = graph_stats(path_graph([1, 1, 1, 1]))
    assert density == pytest.approx(0.4) and radius == 2
    assert graph_stats(gstar_graph()) == (1.0, 1)
    with pytest.raises(GraphError):
        graph_stats(Graph(1, ()))


def test_radius_ignores_weights():
    assert graph_stats(path_graph([10, 1, 1, 10]))[1] == 2
