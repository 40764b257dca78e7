"""Desk-scale corpora and measurements shared by the acceptance suite and scripts/."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .exact import DEFAULT_TERMINAL_CAP
from .generators import LARGE_FRACTIONS, SMALL_FRACTIONS, Record, build_dataset, grid_configs
from .models import ModelParams, predict_scores

ER_SIZES = (10, 20, 30, 40, 50)
TRAIN_SEED = 100
HELD_OUT_SEED = 9000
BATCH_SEED = 5000


def weighted_er_corpus(base_seed: int, seeds_per_cell: int, limit: int | None = None,
                       sizes: Sequence[int] = ER_SIZES) -> list[Record]:
    """Labelled weighted ER instances over every size and terminal fraction.

    Instances above the exact solver's terminal cap are dropped, so the count
    is below ``len(sizes) * 10 * seeds_per_cell``.
    """
    configs = grid_configs(["ER"], sizes, LARGE_FRACTIONS + SMALL_FRACTIONS, seeds_per_cell,
                           weighted=True, base_seed=base_seed)
    records = build_dataset(configs, exact_budget=DEFAULT_TERMINAL_CAP, split_seed=base_seed).labelled
    return records[:limit] if limit is not None else records


def node_accuracy(params: ModelParams, records: Sequence[Record], threshold: float = 0.5) -> float:
    """Per-node accuracy of ``score >= threshold`` with terminals always predicted in."""
    right = total = 0
    for rec in records:
        pred = (predict_scores(params, rec.instance) >= threshold) | rec.instance.terminal_mask()
        right += int(np.sum(pred == (rec.labels > 0)))
        total += rec.instance.n
    return right / total


def terminal_baseline_accuracy(records: Sequence[Record]) -> float:
    """Accuracy of predicting exactly the terminals."""
    right = sum(int(np.sum(rec.instance.terminal_mask() == (rec.labels > 0))) for rec in records)
    return right / sum(rec.instance.n for rec in records)
