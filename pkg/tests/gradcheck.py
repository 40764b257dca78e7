"""Central finite-difference oracle for the model gradients."""
from __future__ import annotations

import numpy as np

from steinerlearn.models.nn import LAYERS, act_forward, bce_with_logits
from steinerlearn.models.training import forward, loss_and_grad

H = 1e-5
RTOL = 1e-4
# floor for coordinates whose true gradient is ~0; central differences in
# float64 with h = 1e-5 carry about 1e-10 of rounding noise
ATOL = 1e-8


def _stack_inputs(params, inp):
    """Input to every layer of a stacked model, dropout off."""
    hyper = params.hyper
    H_ = inp.ff_encoding(hyper["n_max"])[None, :] if "n_max" in hyper else inp.x
    ins = []
    for block, (kind, act, _) in zip(params.blocks, hyper["layers"]):
        ins.append(H_)
        H_ = act_forward(act, LAYERS[kind][0](block, H_, inp)[0])[0]
    return ins


def _loss_fn(params, inp, start, ins, **kw):
    if params.variant == "GNN":
        return lambda: bce_with_logits(forward(params, inp, **kw)[0], inp.labels)[0]
    hyper = params.hyper
    ff = "n_max" in hyper

    # re-run only the layers from the perturbed one onwards
    def loss():
        H_ = ins[start]
        for block, (kind, act, _) in zip(params.blocks[start:], hyper["layers"][start:]):
            H_ = act_forward(act, LAYERS[kind][0](block, H_, inp)[0])[0]
        logits = H_[0, :inp.n] if ff else H_[:, 0]
        return bce_with_logits(logits, inp.labels)[0]
    return loss


def numeric_gradients(params, inp, **kw):
    ins = None if params.variant == "GNN" else _stack_inputs(params, inp)
    out = []
    for i, block in enumerate(params.blocks):
        loss = _loss_fn(params, inp, i, ins, **kw)
        g = {}
        for name, value in block.items():
            flat = value.reshape(-1)
            num = np.empty_like(flat)
            for j in range(flat.size):
                keep = flat[j]
                flat[j] = keep + H
                up = loss()
                flat[j] = keep - H
                down = loss()
                flat[j] = keep
                num[j] = (up - down) / (2 * H)
            g[name] = num.reshape(value.shape)
        out.append(g)
    return out


def relu_margin(params, inp):
    """Smallest |pre-activation| feeding a ReLU; finite differences are only
    meaningful when this is well above the step size."""
    if params.variant == "GNN":
        return np.inf
    hyper = params.hyper
    ins = _stack_inputs(params, inp)
    margin = np.inf
    for block, H_, (kind, act, _) in zip(params.blocks, ins, hyper["layers"]):
        if act == "relu":
            pre = LAYERS[kind][0](block, H_, inp)[0]
            margin = min(margin, float(np.abs(pre).min()))
    return margin


def compare(params, inp, **kw):
    """Worst excess over the tolerance (<= 0 means every coordinate agrees) and the coordinate count."""
    _, analytic = loss_and_grad(params, inp, **kw)
    numeric = numeric_gradients(params, inp, **kw)
    worst, count = -np.inf, 0
    for ga, gn in zip(analytic, numeric):
        for name in ga:
            a, n = ga[name], gn[name]
            excess = np.abs(a - n) - (RTOL * np.maximum(np.abs(a), np.abs(n)) + ATOL)
            worst = max(worst, float(excess.max()))
            count += a.size
    return worst, count
