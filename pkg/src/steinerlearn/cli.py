"""Command-line entry point: ``steinerlearn <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import generators as gen
from .exact import DEFAULT_TERMINAL_CAP, verify_steiner_tree
from .harness import distribution_stats, evaluate, solve, stats_csv
from .models import ModelParams, TrainConfig, predict_scores, train
from .steinlib import parse_stp
from .store import load_dataset, save_dataset


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def cmd_generate(args) -> int:
    overrides = {"er_p": args.er_p if args.er_p == "auto" else float(args.er_p),
                 "ws_k": args.ws_k, "ws_p": args.ws_p, "ba_m": args.ba_m, "ge_eps": args.ge_eps}
    configs = gen.grid_configs(args.families.upper().split(","), _ints(args.sizes), _floats(args.fractions),
                               args.seeds, args.weighted, args.seed, **overrides)
    exact = args.exact_cap if args.label else None
    ds = gen.build_dataset(configs, exact_budget=exact, split_seed=args.seed)
    save_dataset(ds, args.out)
    print(f"wrote {len(ds)} instances to {args.out}")
    return 0


def cmd_label(args) -> int:
    ds = load_dataset(args.dataset)
    done = 0
    for i, rec in enumerate(ds.records):
        if rec.labelled and not args.force:
            continue
        ds.records[i] = gen.label_record(rec, args.exact_cap)
        done += ds.records[i].labelled
    save_dataset(ds, args.dataset)
    print(f"labelled {done} instances; {sum(not r.labelled for r in ds)} above the terminal cap")
    return 0


def cmd_train(args) -> int:
    ds = load_dataset(args.dataset)
    records = [r for r in ds.split(args.split) if r.labelled]
    cfg = TrainConfig(lr=args.lr, epochs=args.epochs, seed=args.seed, dropout=args.dropout)
    params = train(args.variant.upper(), records, cfg, n_max=args.n_max,
                   callback=lambda e, loss: logging.info("epoch %d loss %.5f", e, loss))
    params.save(args.out)
    print(f"trained {params.variant} on {len(records)} instances: loss {params.losses[0]:.4f} -> "
          f"{params.losses[-1]:.4f}; saved {args.out}")
    return 0


def cmd_score(args) -> int:
    params = ModelParams.load(args.model)
    inst = parse_stp(Path(args.instance).read_bytes())
    print(json.dumps({"id": inst.id, "variant": params.variant, "scores": predict_scores(params, inst).tolist()}))
    return 0


def cmd_solve(args) -> int:
    inst = parse_stp(Path(args.instance).read_bytes())
    models = {}
    if args.model:
        m = ModelParams.load(args.model)
        models[m.variant] = m
    method = args.method
    if method in ("h1", "h2"):
        if not models:
            raise ValueError(f"--method {method} needs --model")
        method = f"{method}-{next(iter(models)).lower()}"
    tree = solve(method, inst, models)
    valid, cost = verify_steiner_tree(inst, tree)
    den = inst.graph.denominator
    print(json.dumps({"id": inst.id, "method": method, "valid": valid,
                      "cost": cost if den == 1 else cost / den,
                      "edges": [[u + 1, v + 1] for u, v, _ in tree.edges]}))
    return 0 if valid else 1


def cmd_eval(args) -> int:
    ds = load_dataset(args.dataset)
    models = {}
    for path in args.models:
        m = ModelParams.load(path)
        models[m.variant] = m
    split = None if args.split == "all" else args.split
    report = evaluate(args.methods.split(","), ds, models, split=split)
    json_path, csv_path = report.write(args.report)
    sys.stdout.write(report.summary_csv())
    print(f"report: {json_path} and {csv_path}; {report.unlabelled} unlabelled instances skipped")
    return 0


def cmd_stats(args) -> int:
    text = stats_csv(distribution_stats(load_dataset(args.dataset)))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_parse(args) -> int:
    inst = parse_stp(Path(args.file).read_bytes())
    print(json.dumps({"id": inst.id, "nodes": inst.n, "edges": inst.graph.m,
                      "terminals": len(inst.terminals), "weight_denominator": inst.graph.denominator}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steinerlearn", description="Steiner tree instances, solvers and learned heuristics")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a dataset directory")
    g.add_argument("--families", default="ER,WS,BA,GE")
    g.add_argument("--sizes", default="10,20,30")
    g.add_argument("--fractions", default=",".join(map(str, gen.LARGE_FRACTIONS + gen.SMALL_FRACTIONS)))
    g.add_argument("--seeds", type=int, default=1, help="instances per grid cell")
    g.add_argument("--seed", type=int, default=0, help="base seed")
    g.add_argument("--weighted", action="store_true")
    g.add_argument("--er-p", default="auto")
    g.add_argument("--ws-k", type=int, default=6)
    g.add_argument("--ws-p", type=float, default=0.2)
    g.add_argument("--ba-m", type=int, default=5)
    g.add_argument("--ge-eps", type=float, default=0.5)
    g.add_argument("--label", action="store_true", help="solve exactly while generating")
    g.add_argument("--exact-cap", type=int, default=DEFAULT_TERMINAL_CAP)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    lb = sub.add_parser("label", help="attach exact solutions to a dataset")
    lb.add_argument("--dataset", required=True)
    lb.add_argument("--exact-cap", type=int, default=DEFAULT_TERMINAL_CAP)
    lb.add_argument("--force", action="store_true")
    lb.set_defaults(func=cmd_label)

    t = sub.add_parser("train", help="train a node scorer")
    t.add_argument("--variant", required=True, choices=["ff", "gnn", "gcn", "gat", "FF", "GNN", "GCN", "GAT"])
    t.add_argument("--dataset", required=True)
    t.add_argument("--split", default="train")
    t.add_argument("--epochs", type=int, default=500)
    t.add_argument("--lr", type=float, default=1e-3)
    t.add_argument("--dropout", type=float, default=0.5)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--n-max", type=int, default=None, help="feedforward input size (default: largest instance)")
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_train)

    s = sub.add_parser("score", help="print node scores for one STP file")
    s.add_argument("--model", required=True)
    s.add_argument("--instance", required=True)
    s.set_defaults(func=cmd_score)

    so = sub.add_parser("solve", help="solve one STP file")
    so.add_argument("--method", required=True, choices=["exact", "2approx", "h1", "h2"])
    so.add_argument("--instance", required=True)
    so.add_argument("--model")
    so.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="approximation-ratio report")
    e.add_argument("--methods", default="2approx", help="comma list, e.g. 2approx,h1-gcn,h2-gcn")
    e.add_argument("--dataset", required=True)
    e.add_argument("--models", nargs="*", default=[])
    e.add_argument("--split", default="test", help="train, test or all")
    e.add_argument("--report", required=True, help="JSON path; the CSV summary goes beside it")
    e.set_defaults(func=cmd_eval)

    st = sub.add_parser("stats", help="density and radius histograms as CSV")
    st.add_argument("--dataset", required=True)
    st.add_argument("--out")
    st.set_defaults(func=cmd_stats)

    pa = sub.add_parser("parse", help="validate an STP file")
    pa.add_argument("file")
    pa.set_defaults(func=cmd_parse)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - one diagnostic line, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
