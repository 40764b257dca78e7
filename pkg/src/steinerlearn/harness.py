"""Approximation-ratio evaluation and graph-statistics tables."""
from __future__ import annotations

import csv
import io
import json
import time
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .approx import ShortestPathTable, two_approx
from .exact import dreyfus_wagner, verify_steiner_tree
from .generators import Dataset, Record
from .graph import STPInstance, SteinerTree, graph_stats
from .heuristics import h1_induced_mst, h2_terminal_promotion
from .models import ModelInput, ModelParams, predict_scores

HIST_BINS = 20


class InvalidTreeError(AssertionError):
    pass


def parse_method(name: str) -> tuple[str, Optional[str]]:
    """``"h2-gcn"`` -> ``("h2", "GCN")``; plain methods carry no model."""
    base, _, variant = name.lower().partition("-")
    if base not in ("exact", "2approx", "h1", "h2"):
        raise ValueError(f"unknown method {name!r}")
    if base in ("h1", "h2") and not variant:
        raise ValueError(f"method {name!r} needs a model variant, e.g. {base}-gcn")
    return base, (variant.upper() or None)


def solve(method: str, instance: STPInstance, models: Optional[Mapping[str, ModelParams]] = None,
          scores: Optional[np.ndarray] = None, table: Optional[ShortestPathTable] = None) -> SteinerTree:
    base, variant = parse_method(method)
    if base == "exact":
        return dreyfus_wagner(instance).tree
    if base == "2approx":
        return two_approx(instance, table=table)
    if scores is None:
        if not models or variant not in models:
            raise ValueError(f"method {method!r} needs a trained {variant} model")
        scores = predict_scores(models[variant], instance)
    if base == "h1":
        return h1_induced_mst(instance, scores)
    return h2_terminal_promotion(instance, scores, table=table)


@dataclass
class RatioReport:
    rows: list[dict] = field(default_factory=list)
    unlabelled: int = 0

    def summary(self) -> list[dict]:
        groups: dict[tuple[str, str], list[dict]] = defaultdict(list)
        for r in self.rows:
            groups[(r["method"], r["family"])].append(r)
        out = []
        for (method, family), rs in sorted(groups.items()):
            ratios = [r["ratio"] for r in rs]
            out.append({"method": method, "family": family, "max_ratio": max(ratios),
                        "mean_ratio": float(np.mean(ratios)), "count": len(rs),
                        "total_time": sum(r["elapsed"] for r in rs)})
        return out

    def ratios(self, method: str) -> list[float]:
        return [r["ratio"] for r in self.rows if r["method"] == method]

    def to_json(self) -> str:
        return json.dumps({"summary": self.summary(), "rows": self.rows, "unlabelled": self.unlabelled},
                          indent=1)

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, ["method", "family", "max_ratio", "mean_ratio", "count", "total_time"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(self.summary())
        return buf.getvalue()

    def write(self, path: Union[str, Path]) -> tuple[Path, Path]:
        """Full report as JSON at ``path``; summary table as CSV beside it."""
        path = Path(path)
        path.write_text(self.to_json())
        csv_path = path.with_suffix(".csv")
        csv_path.write_text(self.summary_csv())
        return path, csv_path


def evaluate(methods: Sequence[str], dataset: Union[Dataset, Iterable[Record]],
             models: Optional[Mapping[str, ModelParams]] = None, split: Optional[str] = "test",
             clock: Callable[[], float] = time.perf_counter) -> RatioReport:
    """Run every method on every labelled record of ``split`` (all records if None)."""
    for m in methods:
        parse_method(m)
    models = {k.upper(): v for k, v in (models or {}).items()}
    records = list(dataset.records if isinstance(dataset, Dataset) else dataset)
    if split is not None:
        records = [r for r in records if r.split == split]
    report = RatioReport()
    for rec in records:
        if not rec.labelled:
            report.unlabelled += 1
            continue
        inst = rec.instance
        optimal = rec.optimal.cost
        t0 = clock()
        table = ShortestPathTable.of(inst.graph)
        table_time = clock() - t0
        score_cache: dict[str, tuple[np.ndarray, float]] = {}
        inp = None
        for method in methods:
            base, variant = parse_method(method)
            extra = table_time if base in ("2approx", "h2") else 0.0
            scores = None
            if variant is not None:
                if variant not in score_cache:
                    if variant not in models:
                        raise ValueError(f"method {method!r} needs a trained {variant} model")
                    t0 = clock()
                    inp = inp or ModelInput.of(inst)
                    score_cache[variant] = (predict_scores(models[variant], inp), clock() - t0)
                scores, score_time = score_cache[variant]
                extra += score_time
            t0 = clock()
            tree = solve(method, inst, models, scores, table)
            elapsed = clock() - t0 + extra
            valid, cost = verify_steiner_tree(inst, tree)
            if not valid:
                raise InvalidTreeError(f"method {method} returned an invalid tree on instance {inst.id}")
            report.rows.append({"id": inst.id, "family": rec.family, "method": method, "cost": cost,
                                "optimal_cost": optimal, "ratio": cost / optimal, "elapsed": elapsed})
    return report


def distribution_stats(dataset: Union[Dataset, Iterable[Record]], bins: int = HIST_BINS) -> list[dict]:
    """Per-family density and radius histograms with equal-width bins over the observed range.

    A family whose values are all equal gets bins over ``[value, value + 1]``,
    so the first bin holds everything and no bin reaches below the data.
    """
    records = list(dataset.records if isinstance(dataset, Dataset) else dataset)
    values: dict[tuple[str, str], list[float]] = defaultdict(list)
    for rec in records:
        density, radius = graph_stats(rec.instance.graph)
        values[(rec.family, "density")].append(density)
        values[(rec.family, "radius")].append(radius)
    rows = []
    for (family, stat), vals in sorted(values.items()):
        lo, hi = min(vals), max(vals)
        counts, edges = np.histogram(vals, bins=bins, range=(lo, hi if hi > lo else lo + 1))
        for c, lo, hi in zip(counts, edges, edges[1:]):
            rows.append({"family": family, "stat": stat, "bin_lo": float(lo), "bin_hi": float(hi),
                         "count": int(c)})
    return rows


def stats_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, ["family", "stat", "bin_lo", "bin_hi", "count"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
