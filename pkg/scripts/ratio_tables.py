"""Desk-scale approximation-ratio tables for every generator family.

Generates a labelled corpus per family, trains each requested scorer on the
training split and writes one ratio report per family into ``--out``.

    python3 scripts/ratio_tables.py --out runs/tables --epochs 100
"""
from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass, field
from pathlib import Path

from steinerlearn.generators import FAMILIES, LARGE_FRACTIONS, SMALL_FRACTIONS, build_dataset, grid_configs
from steinerlearn.harness import evaluate
from steinerlearn.models import TrainConfig, train
from steinerlearn.store import save_dataset

log = logging.getLogger("ratio_tables")


@dataclass
class TableConfig:
    families: tuple[str, ...] = FAMILIES
    sizes: tuple[int, ...] = (10, 20, 30, 40, 50)
    seeds_per_cell: int = 3
    weighted: bool = True
    variants: tuple[str, ...] = ("GCN", "GAT", "GNN")
    epochs: int = 100
    lr: float = 1e-3
    seed: int = 0
    fractions: tuple[float, ...] = field(default=LARGE_FRACTIONS + SMALL_FRACTIONS)


def run_family(family: str, cfg: TableConfig, out: Path) -> None:
    configs = grid_configs([family], cfg.sizes, cfg.fractions, cfg.seeds_per_cell, cfg.weighted, cfg.seed)
    ds = build_dataset(configs, split_seed=cfg.seed)
    save_dataset(ds, out / f"{family}-data")
    train_set = [r for r in ds.split("train") if r.labelled]
    models = {}
    for variant in cfg.variants:
        params = train(variant, train_set, TrainConfig(lr=cfg.lr, epochs=cfg.epochs, seed=cfg.seed))
        params.save(out / f"{family}-{variant.lower()}.json")
        log.info("%s %s loss %.4f -> %.4f", family, variant, params.losses[0], params.losses[-1])
        models[variant] = params
    methods = ["2approx"] + [f"{h}-{v.lower()}" for v in cfg.variants for h in ("h1", "h2")]
    report = evaluate(methods, ds, models)
    report.write(out / f"{family}-ratios.json")
    for row in report.summary():
        print(f"{family:3s} {row['method']:8s} mean {row['mean_ratio']:.4f} max {row['max_ratio']:.4f} "
              f"n={row['count']} time {row['total_time']:.2f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, required=True)
    ap.add_argument("--families", default=",".join(FAMILIES))
    ap.add_argument("--sizes", default="10,20,30,40,50")
    ap.add_argument("--seeds-per-cell", type=int, default=3)
    ap.add_argument("--unweighted", action="store_true")
    ap.add_argument("--variants", default="GCN,GAT,GNN")
    ap.add_argument("--epochs", type=int, default=100)
    ap.add_argument("--lr", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    cfg = TableConfig(tuple(args.families.upper().split(",")), tuple(int(s) for s in args.sizes.split(",")),
                      args.seeds_per_cell, not args.unweighted, tuple(args.variants.upper().split(",")),
                      args.epochs, args.lr, args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    for family in cfg.families:
        run_family(family, cfg, args.out)


if __name__ == "__main__":
    main()
