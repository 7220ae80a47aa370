"""Command-line interface: run experiments, sweeps, dataset generation, reports."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import datasets, harness


def _common_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", required=True, help="dataset directory (manifest + CSVs)")
    p.add_argument("--algorithms", default="splitea,greedy",
                   help="comma-separated subset of: splitea,randea,copyea,greedy")
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--seed", type=int, default=0, help="base seed; per-run seeds derive from it")
    p.add_argument("--w", type=float, default=0.01)
    p.add_argument("--tau", type=float, default=None, help="absolute distance cap")
    p.add_argument("--tau-mode", choices=["absolute", "3x-mean-nn"], default="3x-mean-nn")
    p.add_argument("--forecaster", choices=["oracle", "persistence"], default="oracle")
    p.add_argument("--alpha", type=float, default=0.05, choices=[0.05, 0.10])
    p.add_argument("--popsize", type=int, default=10)
    p.add_argument("--maxgen", type=int, default=150)
    p.add_argument("--prob", type=float, default=0.5)
    p.add_argument("--budget", type=int, default=1500)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--score-on-predicted", action="store_true",
                   help="score on forecast traffic instead of the served day's actual traffic")
    p.add_argument("--allow-unequal-budgets", action="store_true")
    p.add_argument("--out", default=None, help="output directory")


def _build_spec(args) -> harness.ExperimentSpec:
    ds = datasets.load_dataset(args.dataset)
    names = [n.strip() for n in args.algorithms.split(",") if n.strip()]
    algs = harness.standard_algorithms(names, popsize=args.popsize, maxgen=args.maxgen,
                                       prob=args.prob, budget=args.budget)
    if args.tau_mode == "absolute" and args.tau is None:
        raise ValueError("--tau-mode absolute requires --tau")
    return harness.ExperimentSpec(
        dataset=ds, algorithms=tuple(algs), runs=args.runs, base_seed=args.seed,
        w=args.w, tau=args.tau, tau_mode=args.tau_mode, forecaster=args.forecaster,
        alpha=args.alpha, workers=args.workers,
        score_on_predicted=args.score_on_predicted,
        allow_unequal_budgets=args.allow_unequal_budgets)


def _cmd_run(args) -> int:
    result = harness.run_experiment(_build_spec(args))
    print(f"tau = {result.tau!r}")
    print(result.table.render())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        harness.write_records(result.records, out / "records.ndjson")
        (out / "table.json").write_text(result.table.to_json() + "\n")
        (out / "table.txt").write_text(result.table.render() + "\n")
        print(f"wrote {out / 'records.ndjson'}, table.json, table.txt")
    return 0


def _cmd_sweep(args) -> int:
    spec = _build_spec(args)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    results = harness.sweep(spec, args.param, values)
    docs = []
    for v, res in results:
        print(f"--- {args.param} = {v} (tau = {res.tau!r}) ---")
        print(res.table.render())
        docs.append({"value": v, "tau": res.tau, "table": json.loads(res.table.to_json())})
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sweep.json").write_text(json.dumps(docs, indent=2, sort_keys=True) + "\n")
        for v, res in results:
            harness.write_records(res.records, out / f"records-{args.param}-{v}.ndjson")
        print(f"wrote {out / 'sweep.json'}")
    return 0


def _cmd_compare(args) -> int:
    records = []
    for path in args.records:
        records.extend(harness.read_records(path))
    table = harness.aggregate(records, alpha=args.alpha)
    print(table.render())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "table.json").write_text(table.to_json() + "\n")
        (out / "table.txt").write_text(table.render() + "\n")
    return 0


def _cmd_export_curves(args) -> int:
    records = harness.read_records(args.records)
    harness.export_curves(records, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_gen_dataset(args) -> int:
    sizes = {}
    for key in ("n_points", "box", "n_groups", "np_max", "ng", "nt", "tau_gen", "hours"):
        v = getattr(args, key)
        if v is not None:
            sizes[key] = v
    ds = datasets.make_dataset(args.type, seed=args.seed, n_days=args.days,
                               name=args.name, **sizes)
    out = datasets.save_dataset(ds, args.out)
    print(f"wrote {ds.manifest.n_points} points x {ds.manifest.n_days} days "
          f"x {ds.manifest.hours} hours to {out}")
    return 0


def _cmd_table1(args) -> int:
    text = harness.render_micro_reference()
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bbuclust",
                                 description="Constrained day-by-day traffic clustering toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="compare algorithms on a dataset")
    _common_run_flags(p)
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("sweep", help="re-run a comparison across one parameter")
    _common_run_flags(p)
    p.add_argument("--param", required=True, choices=["w", "tau", "prob", "budget"])
    p.add_argument("--values", required=True, help="comma-separated values")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("compare", help="aggregate stored run records")
    p.add_argument("--records", action="append", required=True)
    p.add_argument("--alpha", type=float, default=0.05, choices=[0.05, 0.10])
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("export-curves", help="dump per-day convergence traces to CSV")
    p.add_argument("--records", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_export_curves)

    p = sub.add_parser("gen-dataset", help="generate a synthetic dataset directory")
    p.add_argument("--type", required=True, choices=list(datasets.KINDS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--days", type=int, default=7)
    p.add_argument("--name", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--n-points", dest="n_points", type=int, default=None)
    p.add_argument("--box", type=float, default=None)
    p.add_argument("--n-groups", dest="n_groups", type=int, default=None)
    p.add_argument("--np-max", dest="np_max", type=int, default=None)
    p.add_argument("--ng", type=int, default=None)
    p.add_argument("--nt", type=int, default=None)
    p.add_argument("--tau-gen", dest="tau_gen", type=float, default=None)
    p.add_argument("--hours", type=int, default=None)
    p.set_defaults(fn=_cmd_gen_dataset)

    p = sub.add_parser("table1", help="print the micro reference score table")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_table1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
