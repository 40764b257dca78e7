"""Turn per-node scores into Steiner trees.

Both constructions start from the terminals plus every node the scorer
predicts (score >= ``threshold``) and then keep taking the best-scoring
remaining nodes until the working set induces a connected subgraph.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .approx import ShortestPathTable, two_approx
from .graph import (
    STPInstance,
    SteinerTree,
    induced_subgraph,
    is_connected,
    minimum_spanning_tree,
    prune_nonterminal_leaves,
)

DEFAULT_THRESHOLD = 0.5


def _ranked_candidates(instance: STPInstance, scores: Sequence[float]) -> list[int]:
    scores = np.asarray(scores, dtype=float)
    if scores.shape != (instance.n,):
        raise ValueError(f"expected {instance.n} scores, got shape {scores.shape}")
    others = [v for v in range(instance.n) if v not in instance.terminal_set]
    # decreasing score, ties to the lower id
    return sorted(others, key=lambda v: (-scores[v], v))


def h1_induced_mst(instance: STPInstance, scores: Sequence[float],
                   threshold: float = DEFAULT_THRESHOLD) -> SteinerTree:
    """MST of the smallest score-ordered node set that induces a connected graph."""
    ranked = _ranked_candidates(instance, scores)
    scores = np.asarray(scores, dtype=float)
    chosen: set[int] = set(instance.terminals)
    rest = []
    for v in ranked:
        if scores[v] >= threshold:
            chosen.add(v)
        else:
            rest.append(v)
    for v in rest:
        if is_connected(instance.graph, chosen):
            break
        chosen.add(v)
    sub, mapping = induced_subgraph(instance.graph, chosen)
    mst = minimum_spanning_tree(sub)
    tree = SteinerTree(tuple((mapping[u], mapping[v], w) for u, v, w in mst.edges))
    return prune_nonterminal_leaves(tree, instance.terminals)


def h2_terminal_promotion(instance: STPInstance, scores: Sequence[float],
                          threshold: float = DEFAULT_THRESHOLD,
                          table: Optional[ShortestPathTable] = None) -> SteinerTree:
    """Promote high-scoring nodes to terminals one at a time, re-running the
    2-approximation after each promotion; keep the cheapest tree seen.

    Every candidate tree is pruned against the original terminals, so a
    promoted node that ends up a leaf costs nothing.
    """
    table = table or ShortestPathTable.of(instance.graph)
    scores = np.asarray(scores, dtype=float)
    original = instance.terminals
    best = two_approx(instance, table=table)
    working = list(original)
    for v in _ranked_candidates(instance, scores):
        if scores[v] < threshold and is_connected(instance.graph, working):
            break
        working.append(v)
        tree = prune_nonterminal_leaves(two_approx(instance, working, table), original)
        if tree.cost < best.cost:
            best = tree
    return best
