from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from ..features import FeatureMatrix, node_features
from ..graph import Graph, STPInstance


def normalized_adjacency(graph: Graph) -> np.ndarray:
    """``D^-1/2 (A + I) D^-1/2``; the self-loops keep isolated nodes well defined."""
    A = graph.adjacency_matrix() + np.eye(graph.n)
    d = 1.0 / np.sqrt(A.sum(axis=1))
    return A * d[:, None] * d[None, :]


def closed_neighbourhood_mask(graph: Graph) -> np.ndarray:
    return (graph.adjacency_matrix() + np.eye(graph.n)) > 0


@dataclass
class ModelInput:
    """Everything a forward pass needs from one instance, computed once."""

    instance: STPInstance
    features: FeatureMatrix
    labels: Optional[np.ndarray] = None

    @classmethod
    def of(cls, instance: STPInstance, labels=None) -> "ModelInput":
        y = None if labels is None else np.asarray(labels, dtype=float)
        return cls(instance, node_features(instance), y)

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def x(self) -> np.ndarray:
        return self.features.rows

    @cached_property
    def a_hat(self) -> np.ndarray:
        return normalized_adjacency(self.instance.graph)

    @cached_property
    def closed_mask(self) -> np.ndarray:
        return closed_neighbourhood_mask(self.instance.graph)

    @cached_property
    def directed_edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(receiver, sender, normalised weight) for both orientations of every edge."""
        g = self.instance.graph
        if not g.m:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, np.zeros(0)
        u, v, w = (np.array(c) for c in zip(*g.edges))
        wn = w / w.max()
        return np.concatenate([u, v]), np.concatenate([v, u]), np.concatenate([wn, wn]).astype(float)

    @cached_property
    def receive_matrix(self) -> np.ndarray:
        recv, _, _ = self.directed_edges
        R = np.zeros((self.n, recv.size))
        R[recv, np.arange(recv.size)] = 1.0
        return R

    @cached_property
    def send_matrix(self) -> np.ndarray:
        _, send, _ = self.directed_edges
        S = np.zeros((self.n, send.size))
        S[send, np.arange(send.size)] = 1.0
        return S

    def ff_encoding(self, n_max: int) -> np.ndarray:
        """Upper-triangle adjacency bits of the ``n_max``-padded graph, then terminal bits."""
        if self.n > n_max:
            raise ValueError(f"instance has {self.n} nodes, feedforward model built for {n_max}")
        pairs = np.zeros(n_max * (n_max - 1) // 2)
        for u, v, _ in self.instance.graph.edges:
            # row-major index of (u, v), u < v, in the strict upper triangle
            pairs[u * (2 * n_max - u - 1) // 2 + (v - u - 1)] = 1.0
        terms = np.zeros(n_max)
        terms[list(self.instance.terminals)] = 1.0
        return np.concatenate([pairs, terms])
