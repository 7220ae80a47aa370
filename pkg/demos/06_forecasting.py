"""
Forecast-driven planning
========================

Day-ahead allocation optimizes tomorrow's clustering on predicted traffic.
The persistence forecaster reuses today's traffic as the prediction; the
oracle forecaster (perfect foresight) bounds what better forecasts buy.
"""
from bbuclust import (ExperimentSpec, forecast_error, make_dataset,
                      persistence_predict, run_experiment, standard_algorithms)

ds = make_dataset("1c-milan", seed=0, n_days=7, n_points=60, box=80.0)

# how wrong is persistence on this instance?
errs = [forecast_error(persistence_predict(ds.traffic, d), ds.traffic[d + 1])
        for d in range(len(ds.traffic) - 1)]
mae = sum(e.mae for e in errs) / len(errs)
print(f"persistence day-ahead MAE over {len(errs)} transitions: {mae:.4f}")

algos = tuple(standard_algorithms(("splitea",), popsize=10, maxgen=50))
for forecaster in ("oracle", "persistence"):
    spec = ExperimentSpec(dataset=ds, algorithms=algos, runs=5, base_seed=0,
                          forecaster=forecaster)
    res = run_experiment(spec)
    f_mean = res.table.means["f"][0]
    print(f"{forecaster:12s} forecasts -> mean served f = {f_mean:.4f}")

# deployed solutions are always scored on the traffic that actually
# arrived, so imperfect forecasts show up as a higher served f
