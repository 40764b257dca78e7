"""Dense numpy building blocks: activations, layers with hand-written
backward passes, Adam and the logit-space binary cross-entropy."""
from __future__ import annotations

import numpy as np

LEAKY_SLOPE = 0.2


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int, shape=None) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape or (fan_in, fan_out))


def dense_block(rng, fan_in: int, fan_out: int) -> dict[str, np.ndarray]:
    return {"W": glorot(rng, fan_in, fan_out), "b": np.zeros(fan_out)}


def sigmoid(z):
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def bce_with_logits(z: np.ndarray, y: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean binary cross-entropy of ``sigmoid(z)`` against ``y`` and its gradient in ``z``."""
    loss = np.maximum(z, 0) - z * y + np.log1p(np.exp(-np.abs(z)))
    return float(loss.mean()), (sigmoid(z) - y) / z.size


# activations: forward returns (out, cache); backward maps upstream grad through

def act_forward(name: str, x: np.ndarray):
    if name == "relu":
        return np.maximum(x, 0), x
    if name == "elu":
        return np.where(x > 0, x, np.expm1(np.minimum(x, 0))), x
    if name == "tanh":
        y = np.tanh(x)
        return y, y
    if name == "none":
        return x, None
    raise ValueError(f"unknown activation {name!r}")


def act_backward(name: str, cache, grad: np.ndarray) -> np.ndarray:
    if name == "relu":
        return grad * (cache > 0)
    if name == "elu":
        return grad * np.where(cache > 0, 1.0, np.exp(np.minimum(cache, 0)))
    if name == "tanh":
        return grad * (1 - cache ** 2)
    return grad


def dropout_forward(x: np.ndarray, rate: float, rng):
    if rng is None or rate <= 0:
        return x, None
    mask = (rng.random(x.shape) >= rate) / (1.0 - rate)
    return x * mask, mask


def dropout_backward(mask, grad):
    return grad if mask is None else grad * mask


# layers: forward(block, H, graph) -> (pre-activation, cache); backward -> (dH, grads)

def dense_forward(block, H, graph=None):
    return H @ block["W"] + block["b"], H


def dense_backward(block, cache, dout):
    H = cache
    return dout @ block["W"].T, {"W": H.T @ dout, "b": dout.sum(0)}


def gcn_block(rng, fan_in: int, fan_out: int) -> dict[str, np.ndarray]:
    return {"W": glorot(rng, fan_in, fan_out), "W_self": glorot(rng, fan_in, fan_out),
            "b": np.zeros(fan_out)}


def gcn_forward(block, H, graph):
    """First-order filter ``H @ W_self + A_hat @ H @ W + b``.

    ``A_hat`` is the self-loop normalised adjacency. ``W_self`` is optional;
    without it the layer is the single-weight renormalised propagation.
    """
    out = graph.a_hat @ (H @ block["W"]) + block["b"]
    if "W_self" in block:
        out = out + H @ block["W_self"]
    return out, (H, graph.a_hat)


def gcn_backward(block, cache, dout):
    H, a_hat = cache
    dHW = a_hat.T @ dout
    dH = dHW @ block["W"].T
    grads = {"W": H.T @ dHW, "b": dout.sum(0)}
    if "W_self" in block:
        dH = dH + dout @ block["W_self"].T
        grads["W_self"] = H.T @ dout
    return dH, grads


def gat_block(rng, fan_in: int, fan_out: int) -> dict[str, np.ndarray]:
    return {
        "W": glorot(rng, fan_in, fan_out),
        "a_src": glorot(rng, 2 * fan_out, 1, shape=fan_out),
        "a_dst": glorot(rng, 2 * fan_out, 1, shape=fan_out),
        "b": np.zeros(fan_out),
    }


def attention_weights(block, Z, mask):
    """Row-softmax of LeakyReLU(a_src.z_i + a_dst.z_j) over each closed neighbourhood."""
    E = (Z @ block["a_src"])[:, None] + (Z @ block["a_dst"])[None, :]
    L = np.where(E > 0, E, LEAKY_SLOPE * E)
    L = np.where(mask, L, -np.inf)
    L = L - L.max(axis=1, keepdims=True)
    P = np.exp(L)
    return P / P.sum(axis=1, keepdims=True), E


def gat_forward(block, H, graph):
    Z = H @ block["W"]
    alpha, E = attention_weights(block, Z, graph.closed_mask)
    return alpha @ Z + block["b"], (H, Z, alpha, E, graph.closed_mask)


def gat_backward(block, cache, dout):
    H, Z, alpha, E, mask = cache
    d_alpha = dout @ Z.T
    dZ = alpha.T @ dout
    dL = alpha * (d_alpha - (alpha * d_alpha).sum(axis=1, keepdims=True))
    dL = np.where(mask, dL, 0.0)
    dE = dL * np.where(E > 0, 1.0, LEAKY_SLOPE)
    ds, dt = dE.sum(axis=1), dE.sum(axis=0)
    dZ = dZ + np.outer(ds, block["a_src"]) + np.outer(dt, block["a_dst"])
    grads = {
        "W": H.T @ dZ,
        "a_src": Z.T @ ds,
        "a_dst": Z.T @ dt,
        "b": dout.sum(0),
    }
    return dZ @ block["W"].T, grads


LAYERS = {
    "dense": (dense_forward, dense_backward),
    "gcn": (gcn_forward, gcn_backward),
    "gat": (gat_forward, gat_backward),
}


class Adam:
    def __init__(self, params: list[dict[str, np.ndarray]], lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = params
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = [{k: np.zeros_like(v) for k, v in b.items()} for b in params]
        self.v = [{k: np.zeros_like(v) for k, v in b.items()} for b in params]
        self.t = 0

    def step(self, grads: list[dict[str, np.ndarray]]) -> None:
        self.t += 1
        c1 = 1 - self.beta1 ** self.t
        c2 = 1 - self.beta2 ** self.t
        for block, g, m, v in zip(self.params, grads, self.m, self.v):
            for k, p in block.items():
                m[k] *= self.beta1
                m[k] += (1 - self.beta1) * g[k]
                v[k] *= self.beta2
                v[k] += (1 - self.beta2) * g[k] ** 2
                p -= self.lr * (m[k] / c1) / (np.sqrt(v[k] / c2) + self.eps)
