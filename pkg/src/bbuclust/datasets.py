"""Synthetic dataset generators, CSV persistence, and manifests.

Dataset kinds combine a location layout with a traffic model:

* ``1a``          random locations, uniform random traffic
* ``2a``          cohesive groups, uniform random traffic
* ``2b``          cohesive groups, known-optimum traffic (per-group hourly
                  sums are exactly 1, so the group partition scores U = 0)
* ``3a``          dense core plus isolated scatter, uniform random traffic
* ``1c-milan``    random locations, city-style daily pattern (midday plateau)
* ``1c-songliao`` random locations, industrial-style pattern (long plateau)
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .model import PointSet, TrafficDay, build_distance_matrix

KINDS = ("1a", "2a", "2b", "3a", "1c-milan", "1c-songliao")

# Hours where the patterned templates hold their plateau (union over draws).
MILAN_PLATEAU_HOURS = tuple(range(12, 18))
SONGLIAO_PLATEAU_HOURS = tuple(range(10, 22))


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    kind: str
    n_points: int
    n_days: int
    hours: int
    distance_metric: str
    seed: int
    generator_params: dict
    provenance: str = "generated"
    optimal_labels: tuple[int, ...] | None = None

    def to_json(self) -> str:
        d = asdict(self)
        if d["optimal_labels"] is not None:
            d["optimal_labels"] = list(d["optimal_labels"])
        return json.dumps(d, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "DatasetManifest":
        d = json.loads(text)
        if d.get("optimal_labels") is not None:
            d["optimal_labels"] = tuple(int(v) for v in d["optimal_labels"])
        return DatasetManifest(**d)


@dataclass(frozen=True)
class Dataset:
    manifest: DatasetManifest
    point_set: PointSet
    traffic: list[TrafficDay]


def _disc(center: np.ndarray, radius: float, size: int, rng: np.random.Generator) -> np.ndarray:
    r = radius * np.sqrt(rng.random(size))
    theta = 2.0 * math.pi * rng.random(size)
    return center + np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def gen_locations_random(n_points: int, box: float, rng: np.random.Generator) -> np.ndarray:
    """n_points uniform in the [0, box]^2 square."""
    if n_points < 1 or box <= 0:
        raise ValueError("need n_points >= 1 and box > 0")
    return rng.uniform(0.0, box, size=(n_points, 2))


def gen_locations_cohesive(n_groups: int, np_max: int, tau: float,
                           rng: np.random.Generator,
                           max_tries: int = 10_000) -> tuple[np.ndarray, list[list[int]]]:
    """Groups of 1..np_max points, each inside a disc of radius tau/2.

    Within a group all pairwise distances are strictly below tau; group
    centers are kept more than 2.2*tau apart so points of different groups
    are strictly farther than tau from each other.
    """
    if n_groups < 1 or np_max < 1 or tau <= 0:
        raise ValueError("need n_groups >= 1, np_max >= 1, tau > 0")
    side = 4.4 * tau * max(math.ceil(math.sqrt(n_groups)), 1) + 4.4 * tau
    centers: list[np.ndarray] = []
    for _ in range(n_groups):
        for _ in range(max_tries):
            c = rng.uniform(0.0, side, size=2)
            if all(float(np.hypot(*(c - prev))) > 2.2 * tau for prev in centers):
                centers.append(c)
                break
        else:
            raise RuntimeError(f"could not place {n_groups} group centers in a {side:.1f} box")
    positions: list[np.ndarray] = []
    groups: list[list[int]] = []
    idx = 0
    for c in centers:
        size = int(rng.integers(1, np_max + 1))
        pts = _disc(c, 0.4995 * tau, size, rng)
        positions.append(pts)
        groups.append(list(range(idx, idx + size)))
        idx += size
    return np.vstack(positions), groups


def gen_locations_core_scatter(ng: int, nt: int, tau: float, rng: np.random.Generator,
                               max_tries: int = 10_000) -> np.ndarray:
    """ng tightly packed core points plus nt - ng isolated scatter points.

    Core points sit inside a disc of radius tau/10 (pairwise far below tau);
    every scatter point is farther than tau from the core and from every
    other scatter point.
    """
    if not (1 <= ng <= nt) or tau <= 0:
        raise ValueError("need 1 <= ng <= nt and tau > 0")
    n_scatter = nt - ng
    side = 2.05 * tau * (2 * math.ceil(math.sqrt(max(n_scatter, 1))) + 2)
    center = np.array([side / 2.0, side / 2.0])
    core = _disc(center, tau / 10.0, ng, rng)
    placed = [core]
    for _ in range(n_scatter):
        existing = np.vstack(placed)
        for _ in range(max_tries):
            p = rng.uniform(0.0, side, size=2)
            if float(np.hypot(existing[:, 0] - p[0], existing[:, 1] - p[1]).min()) > 2.05 * tau:
                placed.append(p[None, :])
                break
        else:
            raise RuntimeError(f"could not scatter {n_scatter} points in a {side:.1f} box")
    return np.vstack(placed)


def gen_traffic_random(n_points: int, n_days: int, hours: int,
                       rng: np.random.Generator) -> list[TrafficDay]:
    """Independent uniform(0, 1) loads for every (day, point, hour)."""
    return [TrafficDay(values=rng.uniform(0.0, 1.0, size=(n_points, hours)), day_index=d)
            for d in range(n_days)]


def gen_traffic_known_optimum(groups: list[list[int]], n_points: int, n_days: int,
                              hours: int, rng: np.random.Generator) -> list[TrafficDay]:
    """Traffic whose per-group hourly sums are exactly 1.

    Each hour, a group's members split a unit load in random proportions, so
    clustering by group achieves utility 0 — a known optimal certificate.
    """
    if sorted(i for g in groups for i in g) != list(range(n_points)):
        raise ValueError("groups must partition 0..n_points-1")
    days = []
    for d in range(n_days):
        v = np.zeros((n_points, hours))
        for g in groups:
            idx = np.asarray(g, dtype=np.int64)
            u = rng.uniform(0.1, 1.0, size=(idx.size, hours))
            shares = u / u.sum(axis=0, keepdims=True)
            # Force the sequential (ascending-member) hourly sum to land on
            # exactly 1.0, matching the accumulation order of cluster_sums.
            partial = np.zeros(hours)
            for row in shares[:-1]:
                partial = partial + row
            shares[-1, :] = 1.0 - partial
            v[idx, :] = shares
        days.append(TrafficDay(values=v, day_index=d))
    return days


def _pattern_anchors(pattern: str, rng: np.random.Generator) -> tuple[list[int], list[float]]:
    if pattern == "milan":
        b1 = int(rng.integers(5, 7))
        plateau = int(rng.integers(5, 7))
        v0 = rng.uniform(0.3, 0.5)
        vmin = rng.uniform(0.05, 0.15)
        vend = rng.uniform(0.2, 0.4)
        return [0, b1, 12, 12 + plateau - 1, 23], [v0, vmin, 1.0, 1.0, vend]
    if pattern == "songliao":
        b1 = int(rng.integers(8, 10))
        plateau = int(rng.integers(10, 12))
        v0 = rng.uniform(0.12, 0.18)
        vmin = rng.uniform(0.08, 0.12)
        vend = rng.uniform(0.25, 0.35)
        ps = b1 + 2
        return [0, b1, ps, ps + plateau - 1, 23], [v0, vmin, 1.0, 1.0, vend]
    raise ValueError(f"unknown pattern {pattern!r}; expected 'milan' or 'songliao'")


def gen_traffic_patterned(n_points: int, n_days: int, pattern: str,
                          rng: np.random.Generator, hours: int = 24) -> list[TrafficDay]:
    """Daily piecewise-linear load curves with noise, clipped to (0, 1].

    ``milan`` dips in the early morning and plateaus over midday;
    ``songliao`` stays low through the morning and holds a long plateau.
    Breakpoints are redrawn per point and day; each point carries a fixed
    amplitude; every entry gets multiplicative noise.
    """
    if hours != 24:
        raise ValueError(f"patterned traffic is defined on 24 clock hours, got hours={hours}")
    amp = rng.uniform(0.5, 1.0, size=n_points)
    hs = np.arange(hours, dtype=float)
    days = []
    for d in range(n_days):
        v = np.empty((n_points, hours))
        for i in range(n_points):
            xp, fp = _pattern_anchors(pattern, rng)
            template = np.interp(hs, xp, fp)
            noise = rng.uniform(0.95, 1.05, size=hours)
            v[i] = np.minimum(amp[i] * template * noise, 1.0)
        days.append(TrafficDay(values=v, day_index=d))
    return days


def make_dataset(kind: str, seed: int, n_days: int = 7, name: str | None = None,
                 **sizes) -> Dataset:
    """Generate one of the named dataset kinds deterministically from a seed.

    Size knobs (all optional, with kind-specific defaults): ``n_points``,
    ``hours``, ``box``, ``n_groups``, ``np_max``, ``ng``, ``nt``, ``tau_gen``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown dataset kind {kind!r}; expected one of {KINDS}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    hours = int(sizes.pop("hours", 24))
    optimal_labels: tuple[int, ...] | None = None
    params: dict = {}

    if kind in ("1a", "1c-milan", "1c-songliao"):
        n_points = int(sizes.pop("n_points", 150))
        box = float(sizes.pop("box", 100.0))
        _reject_extra(sizes)
        positions = gen_locations_random(n_points, box, rng)
        params.update(n_points=n_points, box=box)
        if kind == "1a":
            traffic = gen_traffic_random(n_points, n_days, hours, rng)
        else:
            pattern = kind.split("-", 1)[1]
            traffic = gen_traffic_patterned(n_points, n_days, pattern, rng, hours=hours)
    elif kind in ("2a", "2b"):
        n_groups = int(sizes.pop("n_groups", 30))
        np_max = int(sizes.pop("np_max", 5 if kind == "2a" else 10))
        tau_gen = float(sizes.pop("tau_gen", 10.0))
        _reject_extra(sizes)
        positions, groups = gen_locations_cohesive(n_groups, np_max, tau_gen, rng)
        n_points = positions.shape[0]
        params.update(n_groups=n_groups, np_max=np_max, tau_gen=tau_gen)
        if kind == "2a":
            traffic = gen_traffic_random(n_points, n_days, hours, rng)
        else:
            traffic = gen_traffic_known_optimum(groups, n_points, n_days, hours, rng)
            labels = np.zeros(n_points, dtype=int)
            for k, g in enumerate(groups, start=1):
                labels[g] = k
            optimal_labels = tuple(int(v) for v in labels)
    else:  # "3a"
        ng = int(sizes.pop("ng", 100))
        nt = int(sizes.pop("nt", 158))
        tau_gen = float(sizes.pop("tau_gen", 10.0))
        _reject_extra(sizes)
        positions = gen_locations_core_scatter(ng, nt, tau_gen, rng)
        n_points = nt
        params.update(ng=ng, nt=nt, tau_gen=tau_gen)
        traffic = gen_traffic_random(n_points, n_days, hours, rng)

    manifest = DatasetManifest(
        name=name or f"{kind}-seed{seed}",
        kind=kind, n_points=n_points, n_days=n_days, hours=hours,
        distance_metric="euclidean", seed=seed, generator_params=params,
        provenance="generated", optimal_labels=optimal_labels)
    return Dataset(manifest=manifest,
                   point_set=build_distance_matrix(positions, "euclidean"),
                   traffic=traffic)


def regenerate(manifest: DatasetManifest) -> Dataset:
    """Rebuild a generated dataset from its manifest, bit for bit."""
    if manifest.provenance != "generated":
        raise ValueError(f"cannot regenerate a {manifest.provenance!r} dataset")
    return make_dataset(manifest.kind, manifest.seed, n_days=manifest.n_days,
                        name=manifest.name, hours=manifest.hours,
                        **dict(manifest.generator_params))


def save_dataset(dataset: Dataset, out_dir: str | Path) -> Path:
    """Write locations.csv, traffic.csv, and manifest.json under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pos = dataset.point_set.positions
    with open(out / "locations.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["id", "coord1", "coord2"])
        for i in range(pos.shape[0]):
            wr.writerow([i, repr(float(pos[i, 0])), repr(float(pos[i, 1]))])
    with open(out / "traffic.csv", "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["day", "hour", "point_id", "value"])
        for day in dataset.traffic:
            v = day.values
            for h in range(v.shape[1]):
                for p in range(v.shape[0]):
                    wr.writerow([day.day_index, h, p, repr(float(v[p, h]))])
    (out / "manifest.json").write_text(dataset.manifest.to_json() + "\n")
    return out


def load_dataset(in_dir: str | Path) -> Dataset:
    """Load a dataset directory written by :func:`save_dataset`."""
    d = Path(in_dir)
    manifest = DatasetManifest.from_json((d / "manifest.json").read_text())
    point_set, traffic = _read_csvs(d / "locations.csv", d / "traffic.csv",
                                    manifest.distance_metric)
    if point_set.n_points != manifest.n_points or len(traffic) != manifest.n_days:
        raise ValueError("manifest disagrees with CSV contents")
    return Dataset(manifest=manifest, point_set=point_set, traffic=traffic)


def load_csv_dataset(locations_path: str | Path, traffic_path: str | Path,
                     metric: str = "euclidean", name: str = "csv") -> Dataset:
    """Load bare locations/traffic CSVs (e.g. a real measurement export)."""
    point_set, traffic = _read_csvs(Path(locations_path), Path(traffic_path), metric)
    manifest = DatasetManifest(
        name=name, kind="csv", n_points=point_set.n_points, n_days=len(traffic),
        hours=traffic[0].n_hours, distance_metric=metric, seed=0,
        generator_params={}, provenance="csv", optimal_labels=None)
    return Dataset(manifest=manifest, point_set=point_set, traffic=traffic)


def _reject_extra(sizes: dict) -> None:
    if sizes:
        raise TypeError(f"unexpected size arguments: {sorted(sizes)}")


def _read_csvs(locations_path: Path, traffic_path: Path,
               metric: str) -> tuple[PointSet, list[TrafficDay]]:
    with open(locations_path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd, None)
        if header != ["id", "coord1", "coord2"]:
            raise ValueError(f"{locations_path}: expected header id,coord1,coord2, got {header}")
        rows = [(int(r[0]), float(r[1]), float(r[2])) for r in rd]
    rows.sort(key=lambda r: r[0])
    n = len(rows)
    if [r[0] for r in rows] != list(range(n)):
        raise ValueError(f"{locations_path}: point ids must be exactly 0..{n - 1}")
    positions = np.array([[r[1], r[2]] for r in rows])
    point_set = build_distance_matrix(positions, metric)

    with open(traffic_path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd, None)
        if header != ["day", "hour", "point_id", "value"]:
            raise ValueError(f"{traffic_path}: expected header day,hour,point_id,value, got {header}")
        entries = []
        for lineno, r in enumerate(rd, start=2):
            day, hour, pid, val = int(r[0]), int(r[1]), int(r[2]), float(r[3])
            if not (0.0 <= val <= 1.0):
                raise ValueError(
                    f"{traffic_path} line {lineno}: value {val!r} for day {day}, hour {hour}, "
                    f"point {pid} is outside [0, 1]")
            entries.append((day, hour, pid, val))
    if not entries:
        raise ValueError(f"{traffic_path}: no traffic rows")
    n_days = max(e[0] for e in entries) + 1
    n_hours = max(e[1] for e in entries) + 1
    seen = np.zeros((n_days, n_hours, n), dtype=bool)
    values = np.zeros((n_days, n, n_hours))
    for day, hour, pid, val in entries:
        if not (0 <= day < n_days and 0 <= hour < n_hours and 0 <= pid < n):
            raise ValueError(f"{traffic_path}: entry ({day},{hour},{pid}) out of range")
        if seen[day, hour, pid]:
            raise ValueError(f"{traffic_path}: duplicate entry for day {day}, hour {hour}, point {pid}")
        seen[day, hour, pid] = True
        values[day, pid, hour] = val
    if not seen.all():
        day, hour, pid = np.argwhere(~seen)[0]
        raise ValueError(f"{traffic_path}: missing entry for day {day}, hour {hour}, point {pid}")
    traffic = [TrafficDay(values=values[d], day_index=d) for d in range(n_days)]
    return point_set, traffic
