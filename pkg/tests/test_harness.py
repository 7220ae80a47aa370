import numpy as np
import pytest

from bbuclust import datasets, harness, model


def _tiny_spec(ds, algs=("splitea", "greedy"), runs=3, **kw):
    algorithms = tuple(harness.standard_algorithms(algs, popsize=4, maxgen=6, budget=24))
    defaults = dict(dataset=ds, algorithms=algorithms, runs=runs, base_seed=0,
                    tau=6.0, forecaster="oracle")
    defaults.update(kw)
    return harness.ExperimentSpec(**defaults)


@pytest.fixture(scope="module")
def small_ds():
    return datasets.make_dataset("1a", seed=0, n_days=3, n_points=12, box=12.0)


def test_run_seed_frozen_and_distinct():
    assert harness.run_seed(0, "splitea", 0) == 6206736845396535190
    assert harness.run_seed(7, "greedy", 3) == 9120003743660652645
    seeds = {harness.run_seed(0, a, r) for a in ("splitea", "greedy") for r in range(50)}
    assert len(seeds) == 100


def test_resolve_tau():
    ps = model.build_distance_matrix([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]])
    # nearest-neighbour distances 1, 1, 2 -> mean 4/3 -> tau 4
    assert harness.resolve_tau(ps) == pytest.approx(4.0)
    assert harness.resolve_tau(ps, value=2.5) == 2.5
    with pytest.raises(ValueError):
        harness.resolve_tau(ps, value=-1.0)
    with pytest.raises(ValueError):
        harness.resolve_tau(ps, mode="5x-median")
    single = model.build_distance_matrix([[0.0, 0.0]])
    with pytest.raises(ValueError):
        harness.resolve_tau(single)


def test_plan_days_alignment(rng):
    days = [model.TrafficDay(values=rng.random((2, 3)), day_index=d) for d in range(3)]
    served, opt = harness._plan_days(days, "oracle")
    assert served == [1, 2]
    assert np.array_equal(opt[0].values, days[1].values)
    assert np.array_equal(opt[1].values, days[2].values)
    served, opt = harness._plan_days(days, "persistence")
    assert served == [1, 2]
    assert np.array_equal(opt[0].values, days[0].values)
    assert np.array_equal(opt[1].values, days[1].values)
    served, opt = harness._plan_days(days[:1], "persistence")
    assert served == [0]
    assert np.array_equal(opt[0].values, days[0].values)


def test_trivial_single_point_single_day():
    ds = datasets.make_dataset("1a", seed=4, n_days=1, n_points=1)
    algorithms = tuple(harness.standard_algorithms(("splitea", "greedy"),
                                                   popsize=2, maxgen=5, budget=10))
    spec = harness.ExperimentSpec(dataset=ds, algorithms=algorithms, runs=2,
                                  tau=1.0, w=0.01)
    res = harness.run_experiment(spec)
    u = float(np.abs(ds.traffic[0].values - 1.0).mean())
    for j, _ in enumerate(res.table.algorithms):
        assert res.table.means["K"][j] == pytest.approx(1.0)
        assert res.table.means["f"][j] == pytest.approx(0.01 + u)


def test_budget_parity_enforced(small_ds):
    algorithms = tuple(harness.standard_algorithms(("splitea", "greedy"),
                                                   popsize=4, maxgen=6, budget=23))
    spec = harness.ExperimentSpec(dataset=small_ds, algorithms=algorithms,
                                  runs=2, tau=6.0)
    with pytest.raises(ValueError, match="budgets differ"):
        harness.run_experiment(spec)
    ok = harness.ExperimentSpec(dataset=small_ds, algorithms=algorithms, runs=2,
                                tau=6.0, allow_unequal_budgets=True)
    harness.run_experiment(ok)


def test_run_experiment_records(small_ds):
    res = harness.run_experiment(_tiny_spec(small_ds))
    assert len(res.records) == 2 * 3
    for r in res.records:
        assert len(r.days) == 2  # 3-day dataset serves days 1 and 2
        assert [d.day for d in r.days] == [1, 2]
        for d in r.days:
            assert d.evals_used in (4 * 7, 24)
            assert len(d.trace) == 7
    assert res.table.n_blocks == 3


def test_determinism_across_workers(small_ds):
    a = harness.run_experiment(_tiny_spec(small_ds, runs=4))
    b = harness.run_experiment(_tiny_spec(small_ds, runs=4, workers=2))
    assert a.records == b.records
    assert a.table.to_json() == b.table.to_json()


def test_oracle_scoring_equals_score_on_predicted(small_ds):
    # With a perfect forecaster the served-day actual IS the optimized traffic.
    a = harness.run_experiment(_tiny_spec(small_ds))
    b = harness.run_experiment(_tiny_spec(small_ds, score_on_predicted=True))
    assert a.records == b.records
    with_pers = harness.run_experiment(_tiny_spec(small_ds, forecaster="persistence"))
    assert with_pers.records != a.records


def test_aggregate_marks_clear_winner():
    rng = np.random.default_rng(3)
    records = []
    for alg, base in (("good", 1.0), ("bad", 2.0)):
        for run in range(10):
            days = tuple(harness.DayRecord(day=1, K=3, U=0.1, Udelay=0.05, Uunder1=0.05,
                                           f=base + rng.random() * 0.1, opt_f=1.0,
                                           evals_used=10, trace=(1.0,)) for _ in range(2))
            records.append(harness.RunRecord(algorithm=alg, run=run, seed=run, days=days))
    table = harness.aggregate(records)
    assert table.algorithms == ("good", "bad")
    assert table.marks["f"] == (True, False)
    assert table.marks["K"] == (False, False)  # identical K everywhere
    assert "*" in table.render()


def test_aggregate_rejects_unpaired_runs():
    day = harness.DayRecord(day=0, K=1, U=0.1, Udelay=0.1, Uunder1=0.0, f=1.0,
                            opt_f=1.0, evals_used=1, trace=(1.0,))
    records = [harness.RunRecord(algorithm="a", run=0, seed=0, days=(day,)),
               harness.RunRecord(algorithm="a", run=1, seed=1, days=(day,)),
               harness.RunRecord(algorithm="b", run=2, seed=2, days=(day,))]
    with pytest.raises(ValueError, match="paired"):
        harness.aggregate(records)
    with pytest.raises(ValueError, match="no records"):
        harness.aggregate([])


def test_records_round_trip(tmp_path, small_ds):
    res = harness.run_experiment(_tiny_spec(small_ds, runs=2))
    path = tmp_path / "records.ndjson"
    harness.write_records(res.records, path)
    back = harness.read_records(path)
    assert tuple(back) == res.records
    # byte-stable rewrite
    path2 = tmp_path / "records2.ndjson"
    harness.write_records(back, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_export_curves(tmp_path, small_ds):
    res = harness.run_experiment(_tiny_spec(small_ds, runs=2))
    path = tmp_path / "curves.csv"
    harness.export_curves(res.records, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "algorithm,run,day,generation,best_f"
    expected_rows = sum(len(d.trace) for r in res.records for d in r.days)
    assert len(lines) == 1 + expected_rows
    first = lines[1].split(",")
    assert first[0] == "splitea" and first[2] == "1" and first[3] == "0"


def test_sweep_w_and_budget(small_ds):
    spec = _tiny_spec(small_ds, runs=2)
    out = harness.sweep(spec, "w", [0.01, 0.5])
    assert [v for v, _ in out] == [0.01, 0.5]
    # heavier cluster-count weight drives K down
    k_light = out[0][1].table.means["K"]
    k_heavy = out[1][1].table.means["K"]
    assert all(h <= l for h, l in zip(k_heavy, k_light))

    out = harness.sweep(spec, "budget", [12])
    (_, res), = out
    for r in res.records:
        assert all(d.evals_used in (12, 12 + 4) for d in r.days)
    with pytest.raises(ValueError, match="divisible"):
        harness.sweep(spec, "budget", [13])
    with pytest.raises(ValueError, match="sweep parameter"):
        harness.sweep(spec, "popsize", [5])


def test_standard_algorithms_validation():
    algs = harness.standard_algorithms(("splitea", "randea", "copyea", "greedy"))
    assert [a.kind for a in algs] == ["ea", "ea", "ea", "greedy"]
    assert [a.variant for a in algs[:3]] == ["split", "rand", "copy"]
    with pytest.raises(ValueError):
        harness.standard_algorithms(("annealing",))
    with pytest.raises(ValueError):
        harness.AlgorithmSpec(name="x", kind="tabu")


def test_duplicate_algorithm_names_rejected(small_ds):
    algs = tuple(harness.standard_algorithms(("splitea",))) * 2
    with pytest.raises(ValueError, match="duplicate"):
        harness.run_experiment(harness.ExperimentSpec(dataset=small_ds, algorithms=algs,
                                                      runs=2, tau=6.0))


def test_micro_reference_rows():
    rows = harness.micro_reference_rows()
    assert len(rows) == 30  # six instances x five clusterings
    by_key = {(r["dataset"], r["clustering"]): r for r in rows}
    assert round(by_key[("ds1", "123")]["mean_m"], 3) == 1.004
    assert round(by_key[("ds2", "1, 23")]["mean_one_minus_u"], 3) == 0.683
    text = harness.render_micro_reference()
    assert "meanM" in text and "ds6" in text
