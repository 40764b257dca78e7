"""Weighted undirected graphs, STP instances and the shared graph algorithms.

Edge weights are stored as positive integers scaled by ``Graph.denominator``
so that tree costs compare exactly. Every algorithm here works on the scaled
integers; divide by the denominator only for display.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

Edge = tuple[int, int, int]


class GraphError(ValueError):
    pass


class DisconnectedGraphError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]
    denominator: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"graph needs at least one node, got n={self.n}")
        if self.denominator < 1:
            raise GraphError("weight denominator must be a positive integer")
        seen = set()
        for u, v, w in self.edges:
            if not (0 <= u < v < self.n):
                raise GraphError(f"bad edge ({u}, {v}): ids must satisfy 0 <= u < v < n")
            if w <= 0:
                raise GraphError(f"edge ({u}, {v}) has non-positive weight {w}")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], denominator: int = 1) -> "Graph":
        """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples in any orientation.

        Missing weights default to 1. Edges are canonicalised to ``u < v`` and
        sorted, so two graphs with the same edge set compare equal.
        """
        canon = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = int(e[2]) if len(e) > 2 else 1
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if u > v:
                u, v = v, u
            canon.append((u, v, w))
        canon.sort()
        return cls(n, tuple(canon), denominator)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per-node tuple of ``(neighbor, weight)`` sorted by neighbor id."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def weight_map(self) -> dict[tuple[int, int], int]:
        return {(u, v): w for u, v, w in self.edges}

    def weight(self, u: int, v: int) -> Optional[int]:
        if u > v:
            u, v = v, u
        return self.weight_map.get((u, v))

    def degree(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for u, v, _ in self.edges:
            A[u, v] = A[v, u] = 1.0
        return A

    def weight_matrix(self) -> np.ndarray:
        W = np.zeros((self.n, self.n))
        for u, v, w in self.edges:
            W[u, v] = W[v, u] = w
        return W

    @property
    def is_unit_weight(self) -> bool:
        return all(w == self.denominator for _, _, w in self.edges)


@dataclass(frozen=True)
class STPInstance:
    graph: Graph
    terminals: tuple[int, ...]
    id: str = ""
    seed: Optional[int] = None

    def __post_init__(self):
        terms = tuple(sorted(set(int(t) for t in self.terminals)))
        object.__setattr__(self, "terminals", terms)
        if len(terms) < 2:
            raise GraphError("an STP instance needs at least two terminals")
        if terms[0] < 0 or terms[-1] >= self.graph.n:
            raise GraphError(f"terminal ids must lie in 0..{self.graph.n - 1}")
        if not is_connected(self.graph):
            raise DisconnectedGraphError(f"instance {self.id!r}: graph is not connected")

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def terminal_set(self) -> frozenset[int]:
        return frozenset(self.terminals)

    def terminal_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(self.terminals)] = True
        return mask

    def with_terminals(self, terminals: Iterable[int]) -> "STPInstance":
        return STPInstance(self.graph, tuple(terminals), self.id, self.seed)

    def permuted(self, perm: Sequence[int]) -> "STPInstance":
        """Relabel node ``v`` as ``perm[v]``."""
        perm = [int(p) for p in perm]
        g = Graph.from_edges(self.n, [(perm[u], perm[v], w) for u, v, w in self.graph.edges],
                             self.graph.denominator)
        return STPInstance(g, tuple(perm[t] for t in self.terminals), self.id, self.seed)


@dataclass(frozen=True)
class SteinerTree:
    """An edge set, stored as canonical ``(u, v, w)`` triples, with its scaled cost."""

    edges: tuple[Edge, ...]
    cost: int = field(init=False)

    def __post_init__(self):
        canon = tuple(sorted((min(u, v), max(u, v), int(w)) for u, v, w in self.edges))
        object.__setattr__(self, "edges", canon)
        object.__setattr__(self, "cost", sum(w for _, _, w in canon))

    @cached_property
    def nodes(self) -> frozenset[int]:
        return frozenset(x for u, v, _ in self.edges for x in (u, v))

    @property
    def pairs(self) -> set[tuple[int, int]]:
        return {(u, v) for u, v, _ in self.edges}

    @classmethod
    def from_pairs(cls, graph: Graph, pairs: Iterable[Sequence[int]]) -> "SteinerTree":
        edges = []
        for u, v in pairs:
            w = graph.weight(u, v)
            if w is None:
                raise GraphError(f"edge ({u}, {v}) is not in the graph")
            edges.append((u, v, w))
        return cls(tuple(edges))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _dijkstra(graph: Graph, source: int) -> tuple[list[float], list[int]]:
    # Equal-length alternatives keep the smaller predecessor id, which makes
    # path reconstruction independent of heap ordering.
    INF = float("inf")
    dist: list[float] = [INF] * graph.n
    pred = [-1] * graph.n
    done = [False] * graph.n
    dist[source] = 0
    heap = [(0, source)]
    adj = graph.adjacency
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            if done[v]:
                continue
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == dist[v] and u < pred[v]:
                pred[v] = u
    return dist, pred


def shortest_paths(graph: Graph, source: int) -> tuple[list[int], list[int]]:
    """Single-source shortest path lengths and predecessors (``pred[source] == -1``)."""
    if not 0 <= source < graph.n:
        raise GraphError(f"source {source} out of range")
    dist, pred = _dijkstra(graph, source)
    unreachable = [v for v, d in enumerate(dist) if d == float("inf")]
    if unreachable:
        raise DisconnectedGraphError(
            f"nodes {unreachable[:5]} unreachable from {source}: graph is disconnected")
    return [int(d) for d in dist], pred


def all_pairs_shortest_paths(graph: Graph, return_predecessors: bool = False):
    """Distance matrix from ``n`` single-source runs.

    With ``return_predecessors`` also returns ``pred`` where ``pred[s, v]`` is
    the node before ``v`` on the chosen shortest ``s``-``v`` path.
    """
    dist = np.zeros((graph.n, graph.n), dtype=np.int64)
    pred = np.full((graph.n, graph.n), -1, dtype=np.int64)
    for s in range(graph.n):
        d, p = shortest_paths(graph, s)
        dist[s] = d
        pred[s] = p
    if return_predecessors:
        return dist, pred
    return dist


def path_from_predecessors(pred_row: Sequence[int], source: int, target: int) -> list[int]:
    path = [target]
    while path[-1] != source:
        p = int(pred_row[path[-1]])
        if p < 0:
            raise DisconnectedGraphError(f"no path from {source} to {target}")
        path.append(p)
    path.reverse()
    return path


def spanning_forest(n: int, edges: Iterable[Edge]) -> list[Edge]:
    """Kruskal over ``edges`` ordered by (weight, min id, max id)."""
    uf = _UnionFind(n)
    chosen = []
    for u, v, w in sorted(edges, key=lambda e: (e[2], min(e[0], e[1]), max(e[0], e[1]))):
        if uf.union(u, v):
            chosen.append((u, v, w))
    return chosen


def minimum_spanning_tree(graph: Graph) -> SteinerTree:
    chosen = spanning_forest(graph.n, graph.edges)
    if len(chosen) != graph.n - 1:
        raise DisconnectedGraphError("minimum spanning tree requested for a disconnected graph")
    return SteinerTree(tuple(chosen))


def induced_subgraph(graph: Graph, nodes: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Subgraph on ``nodes``; returns it with ``mapping`` where new id ``i`` is old id ``mapping[i]``."""
    mapping = tuple(sorted(set(int(v) for v in nodes)))
    if not mapping:
        raise GraphError("induced subgraph of an empty node set")
    if mapping[0] < 0 or mapping[-1] >= graph.n:
        raise GraphError("induced subgraph node ids out of range")
    index = {v: i for i, v in enumerate(mapping)}
    sub_edges = [(index[u], index[v], w) for u, v, w in graph.edges if u in index and v in index]
    return Graph.from_edges(len(mapping), sub_edges, graph.denominator), mapping


def is_connected(graph: Graph, nodes: Optional[Iterable[int]] = None) -> bool:
    """True iff ``graph`` (or the subgraph induced by ``nodes``) has one component."""
    if nodes is None:
        allowed = None
        start = 0
        target = graph.n
    else:
        allowed = set(nodes)
        if not allowed:
            raise GraphError("connectivity of an empty node set is undefined")
        start = min(allowed)
        target = len(allowed)
    seen = {start}
    queue = deque([start])
    adj = graph.adjacency
    while queue:
        u = queue.popleft()
        for v, _ in adj[u]:
            if v not in seen and (allowed is None or v in allowed):
                seen.add(v)
                queue.append(v)
    return len(seen) == target


def _check_tree(edges: Sequence[Edge]) -> None:
    if not edges:
        return
    nodes = {x for u, v, _ in edges for x in (u, v)}
    if len(edges) != len(nodes) - 1:
        raise GraphError("edge set is not a tree: |E| != |V| - 1")
    index = {v: i for i, v in enumerate(sorted(nodes))}
    uf = _UnionFind(len(index))
    for u, v, _ in edges:
        if not uf.union(index[u], index[v]):
            raise GraphError("edge set is not a tree: contains a cycle")


def prune_nonterminal_leaves(tree: SteinerTree, terminals: Iterable[int]) -> SteinerTree:
    """Strip degree-1 non-terminals until none remain."""
    _check_tree(tree.edges)
    terms = set(terminals)
    missing = terms - tree.nodes if tree.edges else set()
    if missing and len(terms) > 1:
        raise GraphError(f"tree does not span terminals {sorted(missing)[:5]}")
    incident: dict[int, set[tuple[int, int, int]]] = {}
    for e in tree.edges:
        incident.setdefault(e[0], set()).add(e)
        incident.setdefault(e[1], set()).add(e)
    stack = [v for v, es in incident.items() if len(es) == 1 and v not in terms]
    alive = set(tree.edges)
    while stack:
        leaf = stack.pop()
        if len(incident[leaf]) != 1:
            continue
        (e,) = incident[leaf]
        alive.discard(e)
        incident[leaf].clear()
        other = e[0] if e[1] == leaf else e[1]
        incident[other].discard(e)
        if len(incident[other]) == 1 and other not in terms:
            stack.append(other)
    return SteinerTree(tuple(alive))


def hop_eccentricities(graph: Graph) -> np.ndarray:
    ecc = np.zeros(graph.n, dtype=np.int64)
    adj = graph.adjacency
    for s in range(graph.n):
        depth = [-1] * graph.n
        depth[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, _ in adj[u]:
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    queue.append(v)
        if min(depth) < 0:
            raise DisconnectedGraphError("eccentricity undefined on a disconnected graph")
        ecc[s] = max(depth)
    return ecc


def graph_stats(graph: Graph) -> tuple[float, int]:
    """Edge density ``2m / (n(n-1))`` and hop-count radius."""
    if graph.n < 2:
        raise GraphError("density and radius need at least two nodes")
    density = 2 * graph.m / (graph.n * (graph.n - 1))
    return density, int(hop_eccentricities(graph).min())
