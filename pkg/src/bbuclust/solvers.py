"""Day-by-day solvers: the split/copy/rand evolutionary family and a greedy baseline.

All solution construction goes through pairwise feasibility repair, so every
clustering these solvers ever hold satisfies the tau constraint by
construction. Internally individuals are raw 1..K int label arrays; the
public surface wraps them in :class:`~bbuclust.model.Clustering`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import Clustering, PointSet, ProblemConfig, TrafficDay, renumber
from .objective import FitnessValue, fitness_parts

VARIANTS = ("split", "rand", "copy")

# Called with each newly constructed label array (feasibility instrumentation).
AuditHook = Callable[[np.ndarray], None]


@dataclass(frozen=True)
class EaConfig:
    """Evolutionary solver parameters."""

    popsize: int = 10
    maxgen: int = 150
    prob: float = 0.5
    variant: str = "split"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.popsize < 1:
            raise ValueError(f"popsize must be >= 1, got {self.popsize}")
        if self.maxgen < 0:
            raise ValueError(f"maxgen must be >= 0, got {self.maxgen}")
        if not (0.0 <= self.prob <= 1.0):
            raise ValueError(f"prob must be in [0, 1], got {self.prob}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")


@dataclass(frozen=True)
class DayResult:
    """Outcome of optimizing one day: deployed solution, fitness, search trace."""

    day: int
    best: Clustering
    best_fitness: FitnessValue
    trace: list[float]
    evals_used: int


def _initial_labels(adj: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Grow random feasible clusters until every point is assigned."""
    n = adj.shape[0]
    labels = np.zeros(n, dtype=np.int64)
    k = 0
    while True:
        pool = np.flatnonzero(labels == 0)
        if pool.size == 0:
            return labels
        r = int(pool[rng.integers(pool.size)])
        k += 1
        labels[r] = k
        close = pool[adj[r, pool] & (pool != r)]
        if close.size == 0:
            continue
        num = int(rng.integers(0, close.size + 1))
        if num == 0:
            continue
        picked = rng.choice(close, size=num, replace=False)
        added = [r]
        for c in picked:
            c = int(c)
            if adj[c, added].all():
                labels[c] = k
                added.append(c)


def _mutate_labels(labels: np.ndarray, adj: np.ndarray, prob: float,
                   rng: np.random.Generator) -> np.ndarray:
    """Move one point (isolated points preferred) between feasible clusters."""
    n = labels.size
    counts = np.bincount(labels)
    K = counts.size - 1
    r = rng.random()
    iso = np.flatnonzero(counts[labels] == 1)
    if r < prob and iso.size:
        x = int(iso[rng.integers(iso.size)])
    else:
        x = int(rng.integers(n))
    kx = int(labels[x])

    # Clusters other than x's whose every member lies within tau of x.
    outside = np.bincount(labels[~adj[x]], minlength=K + 1)
    full = np.flatnonzero(outside[1:] == 0) + 1
    mut_clusters = full[full != kx]
    if mut_clusters.size:
        target = int(mut_clusters[rng.integers(mut_clusters.size)])
        new = labels.copy()
        new[x] = target
        return renumber(new)

    # Otherwise: clusters with at least one member within tau of x.
    near = np.bincount(labels[adj[x]], minlength=K + 1)
    near[kx] = 0
    adjacent = np.flatnonzero(near[1:] > 0) + 1
    if adjacent.size == 0:
        # Nothing reachable: x ends up isolated (a no-op if it already was).
        if counts[kx] == 1:
            return labels.copy()
        new = labels.copy()
        new[x] = K + 1
        return renumber(new)

    c = int(adjacent[rng.integers(adjacent.size)])
    cand = np.flatnonzero((labels == c) & adj[x])
    num = int(rng.integers(1, cand.size + 1))
    picked = rng.choice(cand, size=num, replace=False)
    new = labels.copy()
    new[x] = K + 1
    added = [x]
    for p in picked:
        p = int(p)
        if adj[p, added].all():
            new[p] = K + 1
            added.append(p)
    return renumber(new)


def _split_labels(labels: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Split a random multi-member cluster; all-singleton solutions pass through."""
    counts = np.bincount(labels)
    multi = np.flatnonzero(counts[1:] > 1) + 1
    if multi.size == 0:
        return labels.copy()
    c = int(multi[rng.integers(multi.size)])
    mem = np.flatnonzero(labels == c)
    nsplit = int(rng.integers(1, mem.size // 2 + 1))
    picked = rng.choice(mem, size=nsplit, replace=False)
    new = labels.copy()
    new[picked] = counts.size
    return renumber(new)


def initial_pop(point_set: PointSet, tau: float, popsize: int,
                rng: np.random.Generator) -> list[Clustering]:
    """Generate popsize random feasible clusterings (unevaluated)."""
    adj = point_set.dist <= tau
    return [Clustering(_initial_labels(adj, rng)) for _ in range(popsize)]


def mutate(parent: Clustering, point_set: PointSet, tau: float, prob: float,
           rng: np.random.Generator) -> Clustering:
    """One feasibility-preserving mutation of a parent clustering."""
    adj = point_set.dist <= tau
    return Clustering(_mutate_labels(parent.labels, adj, prob, rng))


def split_population(population: Sequence[Clustering],
                     rng: np.random.Generator) -> list[Clustering]:
    """Split one random cluster in each individual (next-day diversification)."""
    return [Clustering(_split_labels(ind.labels, rng)) for ind in population]


def run_ea(point_set: PointSet, traffic_by_day: Sequence[TrafficDay], config: EaConfig,
           problem: ProblemConfig, audit: AuditHook | None = None) -> list[DayResult]:
    """Run the evolutionary solver over consecutive days.

    Each day: evaluate the population on that day's traffic, run
    ``maxgen`` generations of mutate-then-truncate (mu+lambda, stable sort,
    so elitism holds), deploy the best individual, then seed the next day's
    population according to ``config.variant``:

    * ``split``: split one random cluster in every individual,
    * ``copy``:  carry the population over verbatim,
    * ``rand``:  start from a fresh random population.

    Returns one :class:`DayResult` per day; its trace holds the best fitness
    after initial evaluation and after each generation (maxgen + 1 entries),
    and ``evals_used`` is popsize * (maxgen + 1).
    """
    n_days = len(traffic_by_day)
    if n_days == 0:
        raise ValueError("traffic_by_day is empty")
    adj = point_set.dist <= problem.tau
    for t in traffic_by_day:
        if t.n_points != point_set.n_points:
            raise ValueError("traffic and point set disagree on N")
        if t.n_hours != problem.H:
            raise ValueError(f"traffic has {t.n_hours} hours but config.H = {problem.H}")

    seeds = np.random.SeedSequence(config.seed).spawn(n_days + 1)
    rng_init = np.random.default_rng(seeds[0])
    pop = [_initial_labels(adj, rng_init) for _ in range(config.popsize)]
    if audit is not None:
        for lab in pop:
            audit(lab)

    results: list[DayResult] = []
    for d, traffic in enumerate(traffic_by_day):
        rng = np.random.default_rng(seeds[d + 1])
        values = traffic.values
        fits = np.array([fitness_parts(lab, values, problem.w)[0] for lab in pop])
        evals = config.popsize
        order = np.argsort(fits, kind="stable")
        pop = [pop[i] for i in order]
        fits = fits[order]
        trace = [float(fits[0])]

        for _ in range(config.maxgen):
            offspring = [_mutate_labels(lab, adj, config.prob, rng) for lab in pop]
            if audit is not None:
                for lab in offspring:
                    audit(lab)
            off_fits = np.array([fitness_parts(lab, values, problem.w)[0] for lab in offspring])
            evals += config.popsize
            merged = pop + offspring
            merged_fits = np.concatenate([fits, off_fits])
            keep = np.argsort(merged_fits, kind="stable")[: config.popsize]
            pop = [merged[i] for i in keep]
            fits = merged_fits[keep]
            trace.append(float(fits[0]))

        f, K, u_mean = fitness_parts(pop[0], values, problem.w)
        results.append(DayResult(day=d, best=Clustering(pop[0].copy()),
                                 best_fitness=FitnessValue(f=f, K=K, u_mean=u_mean),
                                 trace=trace, evals_used=evals))

        if d + 1 < n_days:
            if config.variant == "split":
                pop = [_split_labels(lab, rng) for lab in pop]
            elif config.variant == "rand":
                pop = [_initial_labels(adj, rng) for _ in range(config.popsize)]
            # "copy": population carries over as-is.
            if audit is not None and config.variant != "copy":
                for lab in pop:
                    audit(lab)
    return results


def run_greedy(point_set: PointSet, traffic_by_day: Sequence[TrafficDay], budget: int,
               problem: ProblemConfig, rng: np.random.Generator,
               checkpoint_every: int = 10,
               audit: AuditHook | None = None) -> list[DayResult]:
    """Greedy point-relocation baseline under an evaluation budget.

    Each day restarts from the all-singleton clustering (its fitness is the
    uncharged first trace entry). Rounds pick a uniform random point and
    evaluate staying put plus every move into a cluster whose members all lie
    within tau, charging one evaluation per candidate; the cheapest candidate
    is committed, ties keeping the current placement. A round that would
    exceed the budget is cut short mid-candidate-list.

    The trace records the committed fitness at every ``checkpoint_every``
    evaluations, so its length is budget // checkpoint_every + 1.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if checkpoint_every < 1:
        raise ValueError(f"checkpoint_every must be >= 1, got {checkpoint_every}")
    n = point_set.n_points
    adj = point_set.dist <= problem.tau
    for t in traffic_by_day:
        if t.n_points != n:
            raise ValueError("traffic and point set disagree on N")
        if t.n_hours != problem.H:
            raise ValueError(f"traffic has {t.n_hours} hours but config.H = {problem.H}")

    results: list[DayResult] = []
    for d, traffic in enumerate(traffic_by_day):
        values = traffic.values
        labels = np.arange(1, n + 1, dtype=np.int64)
        if audit is not None:
            audit(labels)
        cur_f = fitness_parts(labels, values, problem.w)[0]
        baseline_f = cur_f
        commit_log: list[tuple[int, float]] = []
        evals = 0
        while evals < budget:
            x = int(rng.integers(n))
            kx = int(labels[x])
            K = int(labels.max())
            outside = np.bincount(labels[~adj[x]], minlength=K + 1)
            full = np.flatnonzero(outside[1:] == 0) + 1
            targets = full[full != kx]

            best_f = None
            best_labels = None
            # Candidate 0 is "stay"; strict < below keeps current on ties.
            candidates: list[np.ndarray] = [labels]
            for t_label in targets:
                moved = labels.copy()
                moved[x] = t_label
                candidates.append(renumber(moved))
            for i, cand in enumerate(candidates):
                if evals >= budget:
                    break
                if audit is not None and i > 0:
                    audit(cand)
                f = fitness_parts(cand, values, problem.w)[0]
                evals += 1
                if best_f is None or f < best_f:
                    best_f = f
                    best_labels = cand
            if best_f is not None and best_f < cur_f:
                labels = best_labels
                cur_f = best_f
            commit_log.append((evals, cur_f))

        trace = [baseline_f]
        j = 0
        cur = baseline_f
        for c in range(checkpoint_every, budget + 1, checkpoint_every):
            while j < len(commit_log) and commit_log[j][0] <= c:
                cur = commit_log[j][1]
                j += 1
            trace.append(cur)

        f, K, u_mean = fitness_parts(labels, values, problem.w)
        results.append(DayResult(day=d, best=Clustering(labels.copy()),
                                 best_fitness=FitnessValue(f=f, K=K, u_mean=u_mean),
                                 trace=trace, evals_used=evals))
    return results
