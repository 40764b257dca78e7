"""Per-node feature rows for the graph scorers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, STPInstance, all_pairs_shortest_paths

SCHEMA_VERSION = "stp-node-features/v2"
COLUMNS = (
    "terminal",
    "degree",
    "clustering",
    "nearest_terminal_dist",
    "mean_terminal_dist",
    "pair_path_share",
    "nearest_pair_path_share",
)


@dataclass(frozen=True)
class FeatureMatrix:
    rows: np.ndarray
    degree_scale: float
    distance_scale: float
    columns: tuple[str, ...] = COLUMNS
    schema: str = SCHEMA_VERSION

    @property
    def width(self) -> int:
        return self.rows.shape[1]


def clustering_coefficients(graph: Graph, weighted: bool = True) -> np.ndarray:
    """Local clustering; the weighted form uses geometric means of max-normalised weights.

    With every weight equal the two forms coincide.
    """
    deg = graph.degree().astype(float)
    if weighted and graph.m:
        W = graph.weight_matrix() / max(w for _, _, w in graph.edges)
        C = np.cbrt(W)
    else:
        C = graph.adjacency_matrix()
    # ordered-pair sum over neighbours v, w of u of (w_uv w_uw w_vw)^(1/3)
    tri = np.einsum("uv,vw,wu->u", C, C, C)
    denom = deg * (deg - 1)
    out = np.zeros(graph.n)
    ok = denom > 0
    out[ok] = tri[ok] / denom[ok]
    return out


def path_shares(dist: np.ndarray, terminals) -> tuple[np.ndarray, np.ndarray]:
    """How often each node lies on a shortest terminal-terminal path.

    Returns the share of all terminal pairs with some shortest path through
    the node, and the share of terminals with a shortest path through the node
    to one of their nearest other terminals. Ties are kept rather than broken
    by id, so both columns are permutation equivariant.
    """
    T = list(terminals)
    k = len(T)
    DT = dist[np.ix_(T, T)].astype(float)
    np.fill_diagonal(DT, np.inf)
    nearest = DT == DT.min(axis=1, keepdims=True)
    # on[i, j, v]: v lies on a shortest T[i]-T[j] path
    on = dist[T][:, None, :] + dist[T][None, :, :] == dist[np.ix_(T, T)][:, :, None]
    iu, ju = np.triu_indices(k, 1)
    pair = on[iu, ju].sum(axis=0) / len(iu)
    near = (on & nearest[:, :, None]).any(axis=1).sum(axis=0) / k
    return pair, near


def node_features(instance: STPInstance) -> FeatureMatrix:
    g = instance.graph
    dist = all_pairs_shortest_paths(g)
    diameter = float(dist.max()) or 1.0
    to_terms = dist[:, list(instance.terminals)].astype(float)
    pair, near = path_shares(dist, instance.terminals)
    rows = np.column_stack([
        instance.terminal_mask().astype(float),
        g.degree() / max(g.n - 1, 1),
        clustering_coefficients(g, weighted=True),
        to_terms.min(axis=1) / diameter,
        to_terms.mean(axis=1) / diameter,
        pair,
        near,
    ])
    return FeatureMatrix(rows, float(max(g.n - 1, 1)), diameter)
