"""Model construction, Adam training on exact labels, and inference."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ..features import COLUMNS, SCHEMA_VERSION
from ..graph import STPInstance
from .inputs import ModelInput
from .nn import Adam, bce_with_logits, sigmoid
from .params import ModelParams
from .variants import VARIANTS, default_hyper

log = logging.getLogger(__name__)


class TrainingError(RuntimeError):
    pass


class SchemaMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 1e-3
    epochs: int = 500
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    dropout: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.lr < 0:
            raise ValueError("learning rate must be non-negative")


def init_model(variant: str, seed: int = 0, n_max: int = 0, dropout: float = 0.5, **hyper) -> ModelParams:
    variant = variant.upper()
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {sorted(VARIANTS)}")
    if variant == "FF" and n_max < 2:
        raise ValueError("the feedforward model needs n_max >= 2")
    h = default_hyper(variant, len(COLUMNS), n_max)
    if "dropout" in h and variant != "FF":
        h["dropout"] = dropout
    h.update(hyper)
    blocks = VARIANTS[variant][0](np.random.default_rng(seed), h)
    return ModelParams(variant, blocks, h, seed, SCHEMA_VERSION)


def _as_input(item) -> ModelInput:
    if isinstance(item, ModelInput):
        return item
    if isinstance(item, STPInstance):
        return ModelInput.of(item)
    # a generators.Record
    return ModelInput.of(item.instance, item.labels)


def forward(params: ModelParams, inp: ModelInput, rng=None, **kw):
    return VARIANTS[params.variant][1](params.blocks, params.hyper, inp, rng, **kw)


def loss_and_grad(params: ModelParams, inp: ModelInput, rng=None, **kw):
    """BCE over the nodes of one instance and the gradient of every parameter."""
    _, fwd, bwd = VARIANTS[params.variant]
    logits, cache = fwd(params.blocks, params.hyper, inp, rng, **kw)
    loss, dlogits = bce_with_logits(logits, inp.labels)
    return loss, bwd(params.blocks, params.hyper, cache, dlogits)


def mean_loss(params: ModelParams, inputs: Sequence[ModelInput]) -> float:
    return float(np.mean([bce_with_logits(forward(params, x)[0], x.labels)[0] for x in inputs]))


def train(variant: Union[str, ModelParams], data: Iterable, config: TrainConfig = TrainConfig(),
          n_max: Optional[int] = None, callback=None) -> ModelParams:
    """Per-instance Adam steps over shuffled labelled instances.

    ``data`` holds labelled records (or ready ``ModelInput`` objects). A
    ``ModelParams`` as ``variant`` continues from those weights. The returned
    params carry ``losses``: the dropout-free mean loss before training
    followed by the mean training loss of each epoch.
    """
    inputs = [_as_input(x) for x in data]
    inputs = [x for x in inputs if x.labels is not None]
    if not inputs:
        raise TrainingError("no labelled instances to train on")
    if isinstance(variant, ModelParams):
        params = variant.copy()
    else:
        if n_max is None:
            n_max = max(x.n for x in inputs)
        params = init_model(variant, config.seed, n_max=n_max, dropout=config.dropout)
    opt = Adam(params.blocks, config.lr, config.beta1, config.beta2, config.eps)
    rng = np.random.default_rng(config.seed)
    drop_rng = np.random.default_rng([config.seed, 1])
    losses = [mean_loss(params, inputs)]
    for epoch in range(1, config.epochs + 1):
        total = 0.0
        for i in rng.permutation(len(inputs)):
            loss, grads = loss_and_grad(params, inputs[i], drop_rng)
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss at epoch {epoch}")
            total += loss
            opt.step(grads)
        losses.append(total / len(inputs))
        if callback is not None:
            callback(epoch, losses[-1])
        log.debug("%s epoch %d loss %.5f", params.variant, epoch, losses[-1])
    params.losses = losses
    return params


def predict_scores(params: ModelParams, instance: Union[STPInstance, ModelInput]) -> np.ndarray:
    """Per-node probabilities with dropout off."""
    if params.schema != SCHEMA_VERSION:
        raise SchemaMismatch(f"model expects features {params.schema!r}, this build produces {SCHEMA_VERSION!r}")
    inp = instance if isinstance(instance, ModelInput) else ModelInput.of(instance)
    logits, _ = forward(params, inp)
    return sigmoid(logits)
