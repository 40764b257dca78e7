"""Exact Steiner tree solvers: Dreyfus-Wagner subset DP and a brute-force oracle."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import (
    GraphError,
    STPInstance,
    SteinerTree,
    all_pairs_shortest_paths,
    induced_subgraph,
    is_connected,
    minimum_spanning_tree,
    path_from_predecessors,
    prune_nonterminal_leaves,
    spanning_forest,
)

DEFAULT_TERMINAL_CAP = 14
BRUTE_FORCE_MAX_NODES = 12


class TerminalCapExceeded(GraphError):
    pass


@dataclass(frozen=True)
class ExactResult:
    tree: SteinerTree
    optimal_cost: int
    subsets: int
    elapsed: float


def _submasks_with_low_bit(mask: int) -> np.ndarray:
    """Proper nonempty submasks of ``mask`` that contain its lowest set bit.

    Each unordered split {A, mask - A} appears exactly once.
    """
    bits = [b for b in range(mask.bit_length()) if mask >> b & 1]
    low, rest = bits[0], bits[1:]
    # every combination of the remaining bits, except "all of them"
    idx = np.arange(2 ** len(rest) - 1, dtype=np.int64)
    sub = np.full(idx.shape, 1 << low, dtype=np.int64)
    for j, b in enumerate(rest):
        sub |= ((idx >> j) & 1) << b
    return sub


def dreyfus_wagner(instance: STPInstance, terminal_cap: int = DEFAULT_TERMINAL_CAP) -> ExactResult:
    """Minimum Steiner tree by dynamic programming over terminal subsets.

    ``cost[S, v]`` is the cheapest tree connecting terminal subset ``S`` and
    node ``v``. A subset is first closed under splits at a common node, then
    extended along shortest paths. The last terminal acts as root and is left
    out of the subset lattice, so the table has ``2**(k-1)`` rows.
    """
    t0 = time.perf_counter()
    terms = list(instance.terminals)
    k = len(terms)
    if k > terminal_cap:
        raise TerminalCapExceeded(
            f"instance {instance.id!r} has {k} terminals, above the exact-solver cap of "
            f"{terminal_cap}; use the 2-approximation instead")
    graph = instance.graph
    n = graph.n
    dist, pred = all_pairs_shortest_paths(graph, return_predecessors=True)

    root, base = terms[-1], terms[:-1]
    kb = len(base)
    full = (1 << kb) - 1
    cost = np.zeros((full + 1, n), dtype=np.int64)
    # via[S, v]: node where the subtree for S attaches before walking to v
    via = np.zeros((full + 1, n), dtype=np.int64)
    # split[S, u]: one half of the best split of S at u
    split = np.zeros((full + 1, n), dtype=np.int64)

    for i, t in enumerate(base):
        cost[1 << i] = dist[t]
        via[1 << i] = t

    masks = sorted(range(1, full + 1), key=lambda s: (bin(s).count("1"), s))
    arange_n = np.arange(n)
    for S in masks:
        if S & (S - 1) == 0:
            continue
        subs = _submasks_with_low_bit(S)
        joined = cost[subs] + cost[S ^ subs]
        best = joined.argmin(axis=0)
        at_node = joined[best, arange_n]
        split[S] = subs[best]
        ext = at_node[:, None] + dist
        src = ext.argmin(axis=0)
        cost[S] = ext[src, arange_n]
        via[S] = src

    pairs: set[tuple[int, int]] = set()

    def add_path(a: int, b: int) -> None:
        path = path_from_predecessors(pred[a], a, b)
        for x, y in zip(path, path[1:]):
            pairs.add((min(x, y), max(x, y)))

    stack = [(full, root)]
    while stack:
        S, v = stack.pop()
        u = int(via[S, v])
        add_path(u, v)
        if S & (S - 1):
            A = int(split[S, u])
            stack.append((A, u))
            stack.append((S ^ A, u))

    optimal = int(cost[full, root])
    # With positive weights the union is already an optimal tree; the MST pass
    # only canonicalises it against degenerate equal-cost overlaps.
    union = [(u, v, graph.weight(u, v)) for u, v in pairs]
    tree = prune_nonterminal_leaves(SteinerTree(tuple(spanning_forest(n, union))), terms)
    if tree.cost != optimal:
        raise AssertionError(f"DP reconstruction cost {tree.cost} != table value {optimal}")
    return ExactResult(tree, optimal, full + 1, time.perf_counter() - t0)


def brute_force_steiner(instance: STPInstance) -> ExactResult:
    """Enumerate every set of Steiner points; feasible only for tiny graphs."""
    t0 = time.perf_counter()
    graph = instance.graph
    if graph.n > BRUTE_FORCE_MAX_NODES:
        raise GraphError(f"brute force limited to n <= {BRUTE_FORCE_MAX_NODES}, got n={graph.n}")
    terms = list(instance.terminals)
    others = [v for v in range(graph.n) if v not in instance.terminal_set]
    best: Optional[SteinerTree] = None
    count = 0
    for bits in range(1 << len(others)):
        nodes = terms + [others[j] for j in range(len(others)) if bits >> j & 1]
        count += 1
        if not is_connected(graph, nodes):
            continue
        sub, mapping = induced_subgraph(graph, nodes)
        mst = minimum_spanning_tree(sub)
        tree = SteinerTree(tuple((mapping[u], mapping[v], w) for u, v, w in mst.edges))
        tree = prune_nonterminal_leaves(tree, terms)
        if best is None or tree.cost < best.cost:
            best = tree
    assert best is not None  # the full node set is connected
    return ExactResult(best, best.cost, count, time.perf_counter() - t0)


def verify_steiner_tree(instance: STPInstance, tree: SteinerTree) -> tuple[bool, Optional[int]]:
    """Check ``tree`` against ``instance``; the cost is recomputed from the graph."""
    graph = instance.graph
    total = 0
    pairs = set()
    for u, v, w in tree.edges:
        gw = graph.weight(u, v)
        if gw is None or gw != w or (u, v) in pairs:
            return False, None
        pairs.add((u, v))
        total += gw
    nodes = {x for u, v in pairs for x in (u, v)}
    if not instance.terminal_set <= nodes:
        return False, None
    if len(pairs) != len(nodes) - 1:
        return False, None
    if len(spanning_forest(graph.n, tree.edges)) != len(pairs):
        return False, None
    return True, total
