"""On-disk datasets: one STP file per instance plus a ``dataset.jsonl`` sidecar."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .generators import Dataset, Record
from .graph import SteinerTree
from .steinlib import parse_stp, serialize_stp

SIDECAR = "dataset.jsonl"


def _cost_value(cost: int, denominator: int):
    return cost if denominator == 1 else cost / denominator


def save_dataset(dataset: Dataset, directory: Union[str, Path]) -> Path:
    root = Path(directory)
    (root / "instances").mkdir(parents=True, exist_ok=True)
    lines = []
    for i, rec in enumerate(dataset.records):
        inst = rec.instance
        fname = f"instances/{i:05d}_{inst.id or 'instance'}.stp"
        (root / fname).write_bytes(serialize_stp(inst))
        row = {
            "id": inst.id,
            "seed": inst.seed,
            "terminals": list(inst.terminals),
            "labels": None if rec.labels is None else [int(x) for x in rec.labels],
            "split": rec.split,
            "optimal_cost": None if rec.optimal is None
            else _cost_value(rec.optimal.cost, inst.graph.denominator),
            "optimal_edges": None if rec.optimal is None else [[u, v] for u, v, _ in rec.optimal.edges],
            "family": rec.family,
            "weighted": rec.weighted,
            "file": fname,
        }
        lines.append(json.dumps(row, sort_keys=True))
    (root / SIDECAR).write_text("\n".join(lines) + ("\n" if lines else ""))
    return root


def load_dataset(directory: Union[str, Path]) -> Dataset:
    root = Path(directory)
    records = []
    for line in (root / SIDECAR).read_text().splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        inst = parse_stp((root / row["file"]).read_bytes())
        optimal = None
        if row.get("optimal_edges") is not None:
            optimal = SteinerTree.from_pairs(inst.graph, row["optimal_edges"])
        labels = None if row.get("labels") is None else np.array(row["labels"], dtype=np.int8)
        records.append(Record(inst, row.get("family", ""), bool(row.get("weighted", False)),
                              optimal, labels, row.get("split", "train")))
    return Dataset(records)
