"""bbuclust: constrained day-by-day clustering of radio heads onto baseband units."""

from .model import (Clustering, PointSet, ProblemConfig, TrafficDay,
                    build_distance_matrix, haversine_meters, is_feasible,
                    members, normalize_labels)
from .objective import (FitnessValue, LegacyScore, MetricsReport, cluster_hourly_sum,
                        cluster_utility, fitness, legacy_mean_m, legacy_score,
                        metrics, peak_hours)
from .forecast import (ForecastError, forecast_error, make_forecaster,
                       oracle_predict, persistence_predict)
from .datasets import (Dataset, DatasetManifest, load_csv_dataset, load_dataset,
                       make_dataset, regenerate, save_dataset)
from .solvers import DayResult, EaConfig, initial_pop, mutate, run_ea, run_greedy, split_population
from .stats import ComparisonResult, chi2_sf, friedman_nemenyi, rank_rows
from .harness import (AlgorithmSpec, ExperimentResult, ExperimentSpec, ResultTable,
                      RunRecord, aggregate, export_curves, micro_reference_rows,
                      read_records, render_micro_reference, resolve_tau,
                      run_experiment, standard_algorithms, sweep, write_records)

__version__ = "0.1.0"

__all__ = [
    "Clustering", "PointSet", "ProblemConfig", "TrafficDay",
    "build_distance_matrix", "haversine_meters", "is_feasible", "members",
    "normalize_labels",
    "FitnessValue", "LegacyScore", "MetricsReport", "cluster_hourly_sum",
    "cluster_utility", "fitness", "legacy_mean_m", "legacy_score", "metrics",
    "peak_hours",
    "ForecastError", "forecast_error", "make_forecaster", "oracle_predict",
    "persistence_predict",
    "Dataset", "DatasetManifest", "load_csv_dataset", "load_dataset",
    "make_dataset", "regenerate", "save_dataset",
    "DayResult", "EaConfig", "initial_pop", "mutate", "run_ea", "run_greedy",
    "split_population",
    "ComparisonResult", "chi2_sf", "friedman_nemenyi", "rank_rows",
    "AlgorithmSpec", "ExperimentResult", "ExperimentSpec", "ResultTable",
    "RunRecord", "aggregate", "export_curves", "micro_reference_rows",
    "read_records", "render_micro_reference", "resolve_tau",
    "run_experiment", "standard_algorithms", "sweep", "write_records",
    "__version__",
]
