"""Forward and backward passes for the four scorer variants.

Every variant exposes ``init(rng, hyper)``, ``forward(blocks, hyper, inp,
rng=None)`` returning per-node logits plus a cache, and ``backward(blocks,
hyper, cache, dlogits)`` returning gradients shaped like ``blocks``. Passing
an ``rng`` to ``forward`` turns dropout on.
"""
from __future__ import annotations

import numpy as np

from ..graph import Graph
from .inputs import ModelInput, closed_neighbourhood_mask, normalized_adjacency
from .nn import (
    LAYERS,
    act_backward,
    act_forward,
    dense_block,
    dropout_backward,
    dropout_forward,
    gat_block,
    gat_forward,
    gcn_block,
    gcn_forward,
    sigmoid,
)


class DivergenceError(FloatingPointError):
    pass


def default_hyper(variant: str, in_dim: int, n_max: int = 0) -> dict:
    if variant == "FF":
        d = n_max * (n_max - 1) // 2 + n_max
        return {"dims": [d, 100, 100, n_max], "layers": [["dense", "relu", False]] * 2 + [["dense", "none", False]],
                "dropout": 0.0, "n_max": n_max}
    if variant in ("GCN", "GAT"):
        graph_layer, act = ("gcn", "relu") if variant == "GCN" else ("gat", "elu")
        return {"dims": [in_dim, 128, 128, 128, 128, 1],
                "layers": [[graph_layer, act, True]] * 2 + [["dense", "relu", True]] * 2 + [["dense", "none", False]],
                "dropout": 0.5}
    if variant == "GNN":
        return {"in_dim": in_dim, "state_dim": 5, "hidden": 40, "tol": 1e-4, "max_iter": 50,
                "divergence_bound": 1e6}
    raise ValueError(f"unknown variant {variant!r}")


# stacked layers: FF, GCN, GAT

def stack_init(rng, hyper):
    dims = hyper["dims"]
    blocks = []
    for (kind, _, _), a, b in zip(hyper["layers"], dims, dims[1:]):
        init = {"gat": gat_block, "gcn": gcn_block}.get(kind, dense_block)
        blocks.append(init(rng, a, b))
    return blocks


def stack_forward(blocks, hyper, inp: ModelInput, rng=None):
    ff = "n_max" in hyper
    H = inp.ff_encoding(hyper["n_max"])[None, :] if ff else inp.x
    caches = []
    for block, (kind, act, drop) in zip(blocks, hyper["layers"]):
        pre, lc = LAYERS[kind][0](block, H, inp)
        H, ac = act_forward(act, pre)
        mask = None
        if drop:
            H, mask = dropout_forward(H, hyper["dropout"], rng)
        caches.append((lc, ac, mask))
    logits = H[0, :inp.n] if ff else H[:, 0]
    return logits, (caches, H.shape, ff)


def stack_backward(blocks, hyper, cache, dlogits):
    caches, out_shape, ff = cache
    dH = np.zeros(out_shape)
    if ff:
        dH[0, :dlogits.size] = dlogits
    else:
        dH[:, 0] = dlogits
    grads = [None] * len(blocks)
    for i in reversed(range(len(blocks))):
        kind, act, _ = hyper["layers"][i]
        lc, ac, mask = caches[i]
        dH = act_backward(act, ac, dropout_backward(mask, dH))
        dH, grads[i] = LAYERS[kind][1](blocks[i], lc, dH)
    return grads


# diffusion GNN: states iterated to a fixed point, then a per-node readout

def gnn_init(rng, hyper):
    F, s, h = hyper["in_dim"], hyper["state_dim"], hyper["hidden"]
    return [
        dense_block(rng, 2 * F + 1 + s, h),  # transition, hidden
        dense_block(rng, h, s),              # transition, out
        dense_block(rng, s + F, h),          # readout, hidden
        dense_block(rng, h, 1),              # readout, out
    ]


def gnn_forward(blocks, hyper, inp: ModelInput, rng=None, steps=None):
    """Jacobi iteration ``x_n <- sum_v d_w(l_n, l_nv, x_v, l_v)`` then ``f_w(x_n, l_n)``.

    ``steps`` pins the number of iterations instead of iterating to tolerance.
    """
    dw1, dw2, fw1, fw2 = blocks
    s = hyper["state_dim"]
    recv, send, wn = inp.directed_edges
    L = inp.x
    R = inp.receive_matrix
    fixed_part = (L[recv], wn[:, None], L[send])
    X = np.zeros((inp.n, s))
    Zs, Hs = [], []
    limit = hyper["max_iter"] if steps is None else steps
    for t in range(limit):
        Z = np.concatenate([fixed_part[0], fixed_part[1], X[send], fixed_part[2]], axis=1)
        H = np.tanh(Z @ dw1["W"] + dw1["b"])
        X_next = R @ (H @ dw2["W"] + dw2["b"])
        Zs.append(Z)
        Hs.append(H)
        peak = np.abs(X_next).max() if X_next.size else 0.0
        if not np.isfinite(peak) or peak > hyper["divergence_bound"]:
            raise DivergenceError(f"GNN state diverged at iteration {t + 1} (max |x| = {peak:.3g})")
        delta = np.abs(X_next - X).max() if X.size else 0.0
        X = X_next
        if steps is None and delta < hyper["tol"]:
            break
    Fin = np.concatenate([X, L], axis=1)
    Hf = np.tanh(Fin @ fw1["W"] + fw1["b"])
    logits = (Hf @ fw2["W"] + fw2["b"])[:, 0]
    return logits, (Zs, Hs, Fin, Hf, inp)


def gnn_backward(blocks, hyper, cache, dlogits):
    dw1, dw2, fw1, fw2 = blocks
    Zs, Hs, Fin, Hf, inp = cache
    s, F = hyper["state_dim"], hyper["in_dim"]
    g = [{k: np.zeros_like(v) for k, v in b.items()} for b in blocks]
    dz = dlogits[:, None]
    g[3]["W"] += Hf.T @ dz
    g[3]["b"] += dz.sum(0)
    dpre = (dz @ fw2["W"].T) * (1 - Hf ** 2)
    g[2]["W"] += Fin.T @ dpre
    g[2]["b"] += dpre.sum(0)
    dX = (dpre @ fw1["W"].T)[:, :s]
    R, S = inp.receive_matrix, inp.send_matrix
    for Z, H in zip(reversed(Zs), reversed(Hs)):
        dmsg = R.T @ dX
        g[1]["W"] += H.T @ dmsg
        g[1]["b"] += dmsg.sum(0)
        dpre = (dmsg @ dw2["W"].T) * (1 - H ** 2)
        g[0]["W"] += Z.T @ dpre
        g[0]["b"] += dpre.sum(0)
        dX = S @ (dpre @ dw1["W"].T)[:, F + 1:F + 1 + s]
    return g


VARIANTS = {
    "FF": (stack_init, stack_forward, stack_backward),
    "GCN": (stack_init, stack_forward, stack_backward),
    "GAT": (stack_init, stack_forward, stack_backward),
    "GNN": (gnn_init, gnn_forward, gnn_backward),
}


# single-layer entry points, handy outside the training loop

class _GraphView:
    def __init__(self, graph: Graph):
        self.a_hat = normalized_adjacency(graph)
        self.closed_mask = closed_neighbourhood_mask(graph)


def gcn_layer(H: np.ndarray, graph: Graph, block: dict, act: str = "relu") -> np.ndarray:
    pre, _ = gcn_forward(block, H, _GraphView(graph))
    return act_forward(act, pre)[0]


def gat_attention(H: np.ndarray, graph: Graph, block: dict, act: str = "elu",
                  return_weights: bool = False):
    view = _GraphView(graph)
    pre, cache = gat_forward(block, H, view)
    out = act_forward(act, pre)[0]
    return (out, cache[2]) if return_weights else out


def ff_forward(params, instance, n_max: int) -> np.ndarray:
    if instance.n > n_max:
        raise ValueError(f"instance has {instance.n} nodes, above n_max={n_max}")
    if params.hyper["n_max"] != n_max:
        raise ValueError(f"model was built for n_max={params.hyper['n_max']}, not {n_max}")
    logits, _ = stack_forward(params.blocks, params.hyper, ModelInput.of(instance))
    return sigmoid(logits)


def gnn_diffusion(params, instance, features=None) -> np.ndarray:
    inp = ModelInput.of(instance) if features is None else ModelInput(instance, features)
    logits, _ = gnn_forward(params.blocks, params.hyper, inp)
    return sigmoid(logits)
