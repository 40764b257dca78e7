import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from steinerlearn.graph import Graph, STPInstance

A, B, C, D = range(4)


def gstar_graph() -> Graph:
    return Graph.from_edges(4, [(A, B, 5), (A, C, 5), (B, C, 5), (A, D, 3), (B, D, 3), (C, D, 3)])


def gstar_instance() -> STPInstance:
    return STPInstance(gstar_graph(), (A, B, C), "gstar")


@pytest.fixture
def gstar():
    return gstar_instance()


def path_graph(weights) -> Graph:
    return Graph.from_edges(len(weights) + 1, [(i, i + 1, w) for i, w in enumerate(weights)])


def complete_graph(n, w=1) -> Graph:
    return Graph.from_edges(n, [(u, v, w) for u, v in itertools.combinations(range(n), 2)])


def star_graph(leaves) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, v) for v in range(1, leaves + 1)])


@st.composite
def connected_graphs(draw, min_n=2, max_n=8, max_w=10):
    """Random spanning tree plus random extra edges, so always connected."""
    n = draw(st.integers(min_n, max_n))
    edges = {}
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges[(u, v)] = draw(st.integers(1, max_w))
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and draw(st.booleans()):
            edges[(u, v)] = draw(st.integers(1, max_w))
    return Graph.from_edges(n, [(u, v, w) for (u, v), w in edges.items()])


@st.composite
def instances(draw, min_n=3, max_n=8, max_terminals=5, max_w=10):
    g = draw(connected_graphs(min_n, max_n, max_w))
    k = draw(st.integers(2, min(max_terminals, g.n)))
    terms = draw(st.permutations(range(g.n)))[:k]
    return STPInstance(g, tuple(terms), "hyp")


def random_instance(rng: np.random.Generator, n: int, k: int, p: float = 0.4, max_w: int = 10) -> STPInstance:
    """Connected random instance built from a random tree plus G(n, p) extras."""
    edges = {}
    order = rng.permutation(n)
    for i in range(1, n):
        u, v = int(order[rng.integers(i)]), int(order[i])
        edges[(min(u, v), max(u, v))] = int(rng.integers(1, max_w + 1))
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < p:
            edges[(u, v)] = int(rng.integers(1, max_w + 1))
    g = Graph.from_edges(n, [(u, v, w) for (u, v), w in edges.items()])
    terms = rng.choice(n, size=k, replace=False)
    return STPInstance(g, tuple(int(t) for t in terms), f"rand-{n}-{k}")
