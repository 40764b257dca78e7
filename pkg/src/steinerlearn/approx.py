"""Metric-closure 2-approximation (Kou-Markowsky-Berman pipeline)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .graph import (
    Graph,
    STPInstance,
    SteinerTree,
    all_pairs_shortest_paths,
    path_from_predecessors,
    prune_nonterminal_leaves,
    spanning_forest,
)


@dataclass(frozen=True)
class ShortestPathTable:
    """All-pairs distances plus predecessor rows, computed once per graph."""

    dist: np.ndarray
    pred: np.ndarray

    @classmethod
    def of(cls, graph: Graph) -> "ShortestPathTable":
        dist, pred = all_pairs_shortest_paths(graph, return_predecessors=True)
        return cls(dist, pred)

    def path(self, s: int, t: int) -> list[int]:
        return path_from_predecessors(self.pred[s], s, t)


@dataclass(frozen=True)
class MetricClosure:
    terminals: tuple[int, ...]
    # closure edges (s, t, shortest-path distance) with s < t
    edges: tuple[tuple[int, int, int], ...]
    paths: dict[tuple[int, int], tuple[int, ...]]

    def weight(self, s: int, t: int) -> int:
        return dict(((a, b), w) for a, b, w in self.edges)[(min(s, t), max(s, t))]


def metric_closure(instance: STPInstance, terminals: Optional[Iterable[int]] = None,
                   table: Optional[ShortestPathTable] = None) -> MetricClosure:
    terms = tuple(sorted(set(terminals))) if terminals is not None else instance.terminals
    table = table or ShortestPathTable.of(instance.graph)
    edges, paths = [], {}
    for i, s in enumerate(terms):
        for t in terms[i + 1:]:
            edges.append((s, t, int(table.dist[s, t])))
            paths[(s, t)] = tuple(table.path(s, t))
    return MetricClosure(terms, tuple(edges), paths)


def two_approx(instance: STPInstance, terminals: Optional[Iterable[int]] = None,
               table: Optional[ShortestPathTable] = None) -> SteinerTree:
    """Steiner tree of cost at most ``2 (1 - 1/|T|)`` times optimal.

    ``terminals`` overrides the instance terminal set (used when extra nodes
    are promoted); ``table`` reuses precomputed shortest paths.
    """
    graph = instance.graph
    closure = metric_closure(instance, terminals, table)
    closure_mst = spanning_forest(graph.n, closure.edges)
    union = set()
    for s, t, _ in closure_mst:
        path = closure.paths[(s, t)]
        for a, b in zip(path, path[1:]):
            union.add((min(a, b), max(a, b)))
    sub = spanning_forest(graph.n, [(u, v, graph.weight(u, v)) for u, v in union])
    return prune_nonterminal_leaves(SteinerTree(tuple(sub)), closure.terminals)
