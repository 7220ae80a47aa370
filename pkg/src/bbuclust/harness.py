"""Experiment harness: multi-run comparisons, aggregation, and persistence.

A run optimizes each served day on forecast traffic and scores the deployed
solution on that day's actual traffic. Runs are seeded independently per
(algorithm, run index), so results are byte-identical for any worker count.
"""
from __future__ import annotations

import csv
import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .datasets import Dataset
from .forecast import make_forecaster
from .model import Clustering, PointSet, ProblemConfig, TrafficDay
from .objective import cluster_utility, legacy_score, metrics
from .solvers import EaConfig, run_ea, run_greedy
from .stats import friedman_nemenyi

METRIC_NAMES = ("K", "U", "Udelay", "Uunder1", "f")

ALGORITHM_PRESETS = ("splitea", "randea", "copyea", "greedy")


@dataclass(frozen=True)
class AlgorithmSpec:
    """One algorithm configuration entering a comparison."""

    name: str
    kind: str  # "ea" or "greedy"
    popsize: int = 10
    maxgen: int = 150
    prob: float = 0.5
    variant: str = "split"
    budget: int = 1500

    def __post_init__(self) -> None:
        if self.kind not in ("ea", "greedy"):
            raise ValueError(f"kind must be 'ea' or 'greedy', got {self.kind!r}")

    def budget_per_day(self) -> int:
        """Evaluations charged per day (EA charges popsize * maxgen offspring)."""
        return self.popsize * self.maxgen if self.kind == "ea" else self.budget


def standard_algorithms(names: Sequence[str], popsize: int = 10, maxgen: int = 150,
                        prob: float = 0.5, budget: int = 1500) -> list[AlgorithmSpec]:
    """Build the preset algorithms: splitea, randea, copyea, greedy."""
    out = []
    for name in names:
        if name == "greedy":
            out.append(AlgorithmSpec(name=name, kind="greedy", popsize=popsize, budget=budget))
        elif name in ("splitea", "randea", "copyea"):
            out.append(AlgorithmSpec(name=name, kind="ea", popsize=popsize, maxgen=maxgen,
                                     prob=prob, variant=name.removesuffix("ea")))
        else:
            raise ValueError(f"unknown algorithm {name!r}; expected one of {ALGORITHM_PRESETS}")
    return out


@dataclass(frozen=True)
class DayRecord:
    """Deployed-solution metrics for one served day of one run."""

    day: int
    K: int
    U: float
    Udelay: float
    Uunder1: float
    f: float
    opt_f: float  # best fitness on the traffic the solver optimized (forecast)
    evals_used: int
    trace: tuple[float, ...]


@dataclass(frozen=True)
class RunRecord:
    algorithm: str
    run: int
    seed: int
    days: tuple[DayRecord, ...]

    def mean(self, metric: str) -> float:
        return float(np.mean([getattr(d, metric) for d in self.days]))


@dataclass(frozen=True)
class ExperimentSpec:
    dataset: Dataset
    algorithms: tuple[AlgorithmSpec, ...]
    runs: int = 30
    base_seed: int = 0
    w: float = 0.01
    tau: float | None = None
    tau_mode: str = "3x-mean-nn"
    forecaster: str = "oracle"
    alpha: float = 0.05
    workers: int = 1
    score_on_predicted: bool = False
    allow_unequal_budgets: bool = False


@dataclass(frozen=True)
class ResultTable:
    """Aggregated comparison: per-algorithm metric means with significance marks."""

    algorithms: tuple[str, ...]
    alpha: float
    means: dict  # metric -> tuple of per-algorithm means
    marks: dict  # metric -> tuple of bool, True = significantly best
    p_values: dict  # metric -> float | None
    critical_difference: float | None
    n_blocks: int

    def render(self) -> str:
        width = max(len(a) for a in self.algorithms) + 2
        lines = ["algorithm".ljust(width) + "".join(m.rjust(12) for m in METRIC_NAMES)]
        for j, name in enumerate(self.algorithms):
            cells = []
            for m in METRIC_NAMES:
                star = "*" if self.marks[m][j] else " "
                cells.append(f"{self.means[m][j]:10.4f}{star} ")
            lines.append(name.ljust(width) + "".join(cells))
        ps = ", ".join(f"{m}: " + (f"{self.p_values[m]:.3g}" if self.p_values[m] is not None else "n/a")
                       for m in METRIC_NAMES)
        lines.append(f"Friedman p-values  {ps}")
        cd = "n/a" if self.critical_difference is None else f"{self.critical_difference:.4f}"
        lines.append(f"* = significantly better than every other algorithm "
                     f"(Friedman + Nemenyi, alpha={self.alpha}, CD={cd}, n={self.n_blocks})")
        return "\n".join(lines)

    def to_json(self) -> str:
        doc = {
            "algorithms": list(self.algorithms),
            "alpha": self.alpha,
            "n_blocks": self.n_blocks,
            "critical_difference": self.critical_difference,
            "metrics": {m: {"means": list(self.means[m]),
                            "marks": list(self.marks[m]),
                            "p_value": self.p_values[m]} for m in METRIC_NAMES},
        }
        return json.dumps(doc, indent=2, sort_keys=True)


@dataclass(frozen=True)
class ExperimentResult:
    spec: ExperimentSpec
    tau: float
    records: tuple[RunRecord, ...]
    table: ResultTable


def stable_hash64(text: str) -> int:
    """Deterministic 64-bit hash (the builtin hash() is salted per process)."""
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def run_seed(base_seed: int, algorithm: str, run: int) -> int:
    """Derive the per-(algorithm, run) seed from the experiment base seed."""
    return (base_seed ^ stable_hash64(f"{algorithm}:{run}")) & ((1 << 63) - 1)


def resolve_tau(point_set: PointSet, mode: str = "3x-mean-nn",
                value: float | None = None) -> float:
    """Resolve the distance cap: an absolute value, or 3x the mean NN distance."""
    if value is not None:
        if value <= 0:
            raise ValueError(f"tau must be positive, got {value}")
        return float(value)
    if mode != "3x-mean-nn":
        raise ValueError(f"unknown tau mode {mode!r}; expected 'absolute' (with a value) "
                         f"or '3x-mean-nn'")
    if point_set.n_points < 2:
        raise ValueError("3x-mean-nn needs at least 2 points; pass an absolute tau")
    d = point_set.dist.copy()
    np.fill_diagonal(d, np.inf)
    return 3.0 * float(d.min(axis=1).mean())


def _plan_days(traffic: Sequence[TrafficDay], forecaster: str,
               ) -> tuple[list[int], list[TrafficDay]]:
    """Pick the served days and the traffic each one is optimized on.

    Day s >= 1 is optimized on a forecast issued from day s-1. A one-day
    dataset degenerates to serving day 0 on its own (trivially forecast)
    traffic so that every dataset yields at least one served day.
    """
    if len(traffic) == 1:
        return [0], [TrafficDay(values=traffic[0].values.copy(), day_index=0)]
    fc = make_forecaster(forecaster)
    served = list(range(1, len(traffic)))
    return served, [fc(traffic, s - 1) for s in served]


def _run_single(args) -> RunRecord:
    (alg, run, seed, point_set, opt_traffic, score_traffic, served, problem) = args
    if alg.kind == "ea":
        cfg = EaConfig(popsize=alg.popsize, maxgen=alg.maxgen, prob=alg.prob,
                       variant=alg.variant, seed=seed)
        day_results = run_ea(point_set, opt_traffic, cfg, problem)
    else:
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        day_results = run_greedy(point_set, opt_traffic, alg.budget, problem, rng,
                                 checkpoint_every=alg.popsize)
    days = []
    for dr, st, day in zip(day_results, score_traffic, served):
        rep = metrics(dr.best, st, problem)
        days.append(DayRecord(day=day, K=rep.K, U=rep.U, Udelay=rep.Udelay,
                              Uunder1=rep.Uunder1, f=rep.f, opt_f=dr.best_fitness.f,
                              evals_used=dr.evals_used, trace=tuple(dr.trace)))
    return RunRecord(algorithm=alg.name, run=run, seed=seed, days=tuple(days))


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run every (algorithm, run) pair and aggregate a comparison table."""
    ds = spec.dataset
    if spec.runs < 1:
        raise ValueError(f"runs must be >= 1, got {spec.runs}")
    names = [a.name for a in spec.algorithms]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate algorithm names: {names}")
    budgets = {a.name: a.budget_per_day() for a in spec.algorithms}
    if len(set(budgets.values())) > 1 and not spec.allow_unequal_budgets:
        raise ValueError(f"per-day evaluation budgets differ: {budgets}; "
                         f"set allow_unequal_budgets to compare anyway")

    tau = resolve_tau(ds.point_set, spec.tau_mode, spec.tau)
    problem = ProblemConfig(w=spec.w, tau=tau, H=ds.manifest.hours)
    served, opt_traffic = _plan_days(ds.traffic, spec.forecaster)
    score_traffic = opt_traffic if spec.score_on_predicted else [ds.traffic[s] for s in served]

    tasks = [(alg, run, run_seed(spec.base_seed, alg.name, run), ds.point_set,
              opt_traffic, score_traffic, served, problem)
             for alg in spec.algorithms for run in range(spec.runs)]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as ex:
            records = tuple(ex.map(_run_single, tasks))
    else:
        records = tuple(_run_single(t) for t in tasks)
    table = aggregate(records, alpha=spec.alpha)
    return ExperimentResult(spec=spec, tau=tau, records=records, table=table)


def aggregate(records: Sequence[RunRecord], alpha: float = 0.05) -> ResultTable:
    """Aggregate run records into metric means plus Friedman/Nemenyi marks.

    An algorithm is marked on a metric when the omnibus test rejects at
    ``alpha`` and its mean rank beats every other algorithm by at least the
    critical difference.
    """
    if not records:
        raise ValueError("no records to aggregate")
    names: list[str] = []
    for r in records:
        if r.algorithm not in names:
            names.append(r.algorithm)
    by_alg = {n: sorted((r for r in records if r.algorithm == n), key=lambda r: r.run)
              for n in names}
    run_sets = {n: tuple(r.run for r in rs) for n, rs in by_alg.items()}
    if len(set(run_sets.values())) != 1:
        raise ValueError(f"runs are not paired across algorithms: {run_sets}")
    n_runs = len(next(iter(run_sets.values())))

    means: dict = {}
    marks: dict = {}
    p_values: dict = {}
    cd: float | None = None
    k = len(names)
    for m in METRIC_NAMES:
        mat = np.array([[by_alg[n][i].mean(m) for n in names] for i in range(n_runs)])
        means[m] = tuple(float(x) for x in mat.mean(axis=0))
        if k >= 2 and n_runs >= 2:
            comp = friedman_nemenyi(mat, alpha=alpha, names=tuple(names))
            cd = comp.critical_difference
            p_values[m] = comp.p_value
            marks[m] = tuple(all(comp.better(j, i) for i in range(k) if i != j)
                             for j in range(k))
        else:
            p_values[m] = None
            marks[m] = tuple(False for _ in names)
    return ResultTable(algorithms=tuple(names), alpha=alpha, means=means, marks=marks,
                       p_values=p_values, critical_difference=cd, n_blocks=n_runs)


def write_records(records: Sequence[RunRecord], path: str | Path) -> None:
    """Persist run records as NDJSON (one run per line, sorted keys)."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w") as fh:
        for r in records:
            doc = {"algorithm": r.algorithm, "run": r.run, "seed": r.seed,
                   "days": [{"day": d.day, "K": d.K, "U": d.U, "Udelay": d.Udelay,
                             "Uunder1": d.Uunder1, "f": d.f, "opt_f": d.opt_f,
                             "evals_used": d.evals_used, "trace": list(d.trace)}
                            for d in r.days]}
            fh.write(json.dumps(doc, sort_keys=True) + "\n")


def read_records(path: str | Path) -> list[RunRecord]:
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            doc = json.loads(line)
            days = tuple(DayRecord(day=d["day"], K=d["K"], U=d["U"], Udelay=d["Udelay"],
                                   Uunder1=d["Uunder1"], f=d["f"], opt_f=d["opt_f"],
                                   evals_used=d["evals_used"], trace=tuple(d["trace"]))
                         for d in doc["days"])
            records.append(RunRecord(algorithm=doc["algorithm"], run=doc["run"],
                                     seed=doc["seed"], days=days))
    return records


def export_curves(records: Sequence[RunRecord], path: str | Path) -> None:
    """Write per-day convergence traces as CSV (one row per checkpoint)."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["algorithm", "run", "day", "generation", "best_f"])
        for r in records:
            for d in r.days:
                for g, v in enumerate(d.trace):
                    wr.writerow([r.algorithm, r.run, d.day, g, repr(float(v))])


def sweep(spec: ExperimentSpec, param: str, values: Sequence[float],
          ) -> list[tuple[float, ExperimentResult]]:
    """Re-run the experiment across values of one parameter.

    ``param`` is one of "w", "tau", "prob", "budget". A budget sweep keeps
    popsize and rescales EA generations so per-day budgets stay matched.
    """
    out = []
    for v in values:
        if param == "w":
            s = replace(spec, w=float(v))
        elif param == "tau":
            s = replace(spec, tau=float(v), tau_mode="absolute")
        elif param == "prob":
            algs = tuple(replace(a, prob=float(v)) if a.kind == "ea" else a
                         for a in spec.algorithms)
            s = replace(spec, algorithms=algs)
        elif param == "budget":
            b = int(v)
            algs = []
            for a in spec.algorithms:
                if a.kind == "ea":
                    if b % a.popsize:
                        raise ValueError(f"budget {b} not divisible by popsize {a.popsize}")
                    algs.append(replace(a, maxgen=b // a.popsize))
                else:
                    algs.append(replace(a, budget=b))
            s = replace(spec, algorithms=tuple(algs))
        else:
            raise ValueError(f"unknown sweep parameter {param!r}")
        out.append((float(v), run_experiment(s)))
    return out


# ---------------------------------------------------------------------------
# Micro reference instances: six 3-point, 3-hour traffic tables whose scores
# are small enough to check by hand, under five fixed clusterings.

MICRO_TRAFFIC = {
    "ds1": [[0.8, 0.5, 0.3], [0.2, 0.7, 0.1], [0.2, 0.6, 0.7]],
    "ds2": [[0.8, 0.5, 0.3], [0.7, 0.2, 0.1], [0.2, 0.6, 0.7]],
    "ds3": [[0.8, 0.5, 0.3], [0.7, 0.2, 0.1], [0.7, 0.6, 0.2]],
    "ds4": [[0.18, 0.15, 0.13], [0.12, 0.17, 0.11], [0.12, 0.16, 0.17]],
    "ds5": [[0.18, 0.15, 0.13], [0.17, 0.12, 0.11], [0.12, 0.16, 0.17]],
    "ds6": [[0.18, 0.15, 0.13], [0.17, 0.12, 0.11], [0.17, 0.16, 0.12]],
}

MICRO_CLUSTERINGS = [
    ("12, 3", (1, 1, 2)),
    ("13, 2", (1, 2, 1)),
    ("1, 23", (1, 2, 2)),
    ("1, 2, 3", (1, 2, 3)),
    ("123", (1, 1, 1)),
]


def micro_reference_rows() -> list[dict]:
    """Score every micro instance under every fixed clustering.

    Each row carries per-cluster (1 - U, entropy) pairs plus their means;
    meanM is the cluster-mean of (1 - U) * entropy.
    """
    rows = []
    for ds_name, table in MICRO_TRAFFIC.items():
        traffic = TrafficDay(values=np.array(table, dtype=float))
        for label, labs in MICRO_CLUSTERINGS:
            clustering = Clustering(labels=np.array(labs, dtype=np.int64))
            per_cluster = []
            for kk in range(1, clustering.K + 1):
                mem = np.flatnonzero(clustering.labels == kk)
                one_minus_u = 1.0 - cluster_utility(traffic, mem)
                ent = legacy_score(mem, traffic, m=1).h_entropy
                per_cluster.append((one_minus_u, ent))
            rows.append({
                "dataset": ds_name,
                "clustering": label,
                "per_cluster": per_cluster,
                "mean_one_minus_u": float(np.mean([c[0] for c in per_cluster])),
                "mean_m": float(np.mean([c[0] * c[1] for c in per_cluster])),
            })
    return rows


def render_micro_reference() -> str:
    """Text table of the micro reference scores (3 decimal places)."""
    lines = [f"{'dataset':8} {'clustering':10} {'per-cluster (1-U, H)':44} "
             f"{'mean(1-U)':>9} {'meanM':>7}"]
    for row in micro_reference_rows():
        pc = "  ".join(f"({u:.3f}, {h:.3f})" for u, h in row["per_cluster"])
        lines.append(f"{row['dataset']:8} {row['clustering']:10} {pc:44} "
                     f"{row['mean_one_minus_u']:9.3f} {row['mean_m']:7.3f}")
    return "\n".join(lines)
