"""Seeded Monte Carlo harness over the sampling + cut pipeline.

Each trial samples a graph from a per-trial derived seed, runs the full
pipeline, checks the exact identities that must hold on every sample,
and emits one flat record.  Failed trials (disconnected sample, no
large cusp) are recorded with a status instead of being resampled, so
measured fractions stay interpretable against the sampling measure.
Reruns with the same inputs reproduce every field except the wall
time.
"""

from __future__ import annotations

import csv
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .cheeger import DisconnectedSurface, EmptyI1, cheeger_upper_bound
from .cusps import partition_cusps
from .farey import classify_segments
from .ribbon import derive_seed, faces, sample

__all__ = [
    "SCHEMA_VERSION",
    "CSV_COLUMNS",
    "InsufficientData",
    "NoUsableRows",
    "TrialRecord",
    "SummaryStats",
    "run_trial",
    "run_grid",
    "write_csv",
    "lht_growth_fit",
    "h_fraction_below",
    "membership_fraction",
    "summarize",
]

SCHEMA_VERSION = 1

CSV_COLUMNS = [
    "schema_version",
    "n",
    "seed",
    "trial",
    "status",
    "lht",
    "genus",
    "connected",
    "min_d",
    "max_d",
    "sum_d",
    "num_i1",
    "boundary_len",
    "area_a",
    "area_b",
    "h_upper",
    "s2_size",
    "wall_time_ms",
]


class InsufficientData(ValueError):
    """Not enough grid points or trials for the requested fit."""


class NoUsableRows(ValueError):
    """No rows with a computed bound at the requested n."""


@dataclass(frozen=True)
class TrialRecord:
    """One pipeline run, flattened for CSV output."""

    n: int
    seed: int
    trial_index: int
    status: str  # ok | disconnected | empty_i1
    lht: int
    genus: int | None
    connected: bool
    min_degree: int
    max_degree: int
    sum_degrees: int
    num_i1: int | None
    boundary_length: float | None
    area_a: float | None
    area_b: float | None
    h_upper: float | None
    s2_size: int | None
    wall_time_ms: int

    def csv_row(self) -> list[str]:
        def fmt(x) -> str:
            if x is None:
                return ""
            if isinstance(x, bool):
                return "1" if x else "0"
            if isinstance(x, float):
                return repr(x)
            return str(x)

        return [
            fmt(SCHEMA_VERSION),
            fmt(self.n),
            fmt(self.seed),
            fmt(self.trial_index),
            self.status,
            fmt(self.lht),
            fmt(self.genus),
            fmt(self.connected),
            fmt(self.min_degree),
            fmt(self.max_degree),
            fmt(self.sum_degrees),
            fmt(self.num_i1),
            fmt(self.boundary_length),
            fmt(self.area_a),
            fmt(self.area_b),
            fmt(self.h_upper),
            fmt(self.s2_size),
            fmt(self.wall_time_ms),
        ]


@dataclass(frozen=True)
class SummaryStats:
    """Per-grid-point aggregate of trial records."""

    n: int
    trials: int
    usable: int
    excluded: int
    mean_lht: float
    var_lht: float
    h_threshold: float
    fraction_h_below: float | None


def _check_record(rec: TrialRecord, n: int, i1_degree_mass: int | None) -> None:
    """Identities that hold on every sample; a violation is a bug."""
    if rec.sum_degrees != 6 * n:
        raise AssertionError(f"degree sum {rec.sum_degrees} != 6n for n={n}")
    if rec.connected:
        if rec.genus is None or 2 - 2 * rec.genus != rec.lht - n:
            raise AssertionError(f"Euler identity fails: genus={rec.genus}, lht={rec.lht}")
    if rec.status == "ok":
        if not math.isclose(rec.area_a + rec.area_b, 2 * math.pi * n, abs_tol=1e-9):
            raise AssertionError("area conservation fails")
    if i1_degree_mass is not None and n >= 3:
        # large cusps hold all degree mass except at most lht small cusps
        # of at most n/(log n)^2 each
        floor = 6 * n - rec.lht * n / math.log(n) ** 2
        if i1_degree_mass < floor - 1e-9:
            raise AssertionError("large-cusp degree mass below its theorem floor")


def run_trial(
    n: int,
    seed: int,
    trial_index: int,
    y_factor: float = 1.0,
    s2_l: float | None = None,
) -> TrialRecord:
    """Sample, trace faces, run the cut pipeline, and flatten the result."""
    t0 = time.perf_counter()
    g = sample(n, seed)
    fd = faces(g)
    status = "ok"
    num_i1 = None
    boundary_length = None
    area_a = None
    area_b = None
    h_upper = None
    s2_size = None
    i1_degree_mass = None
    try:
        division = cheeger_upper_bound(g, fd, n, y_factor)
        num_i1 = division.num_i1
        i1_degree_mass = sum(fd.degrees[i] for i in division.i1)
        # sanity: each triangle contributes at most one boundary dart
        if len(division.boundary_segments) > 2 * n:
            raise AssertionError("more boundary segments than triangles")
        boundary_length = division.boundary_length
        area_a = division.area_a
        area_b = division.area_b
        h_upper = division.h_upper
        if s2_l is not None:
            partition = partition_cusps(fd, n)
            _, s2 = classify_segments(g, fd, partition, s2_l)
            s2_size = len(s2)
    except DisconnectedSurface:
        status = "disconnected"
    except EmptyI1:
        status = "empty_i1"
        num_i1 = 0
    wall_ms = int(round((time.perf_counter() - t0) * 1000))
    rec = TrialRecord(
        n=n,
        seed=seed,
        trial_index=trial_index,
        status=status,
        lht=fd.lht,
        genus=fd.genus,
        connected=fd.connected,
        min_degree=fd.min_degree,
        max_degree=fd.max_degree,
        sum_degrees=fd.sum_degrees,
        num_i1=num_i1,
        boundary_length=boundary_length,
        area_a=area_a,
        area_b=area_b,
        h_upper=h_upper,
        s2_size=s2_size,
        wall_time_ms=wall_ms,
    )
    _check_record(rec, n, i1_degree_mass)
    return rec


def _trial_args(args: tuple) -> TrialRecord:
    return run_trial(*args)


def run_grid(
    n_values: Sequence[int],
    trials: int,
    base_seed: int,
    y_factor: float = 1.0,
    out_path: str | Path | None = None,
    s2_l: float | None = None,
    workers: int = 1,
) -> list[TrialRecord]:
    """One record per (n, trial), with per-trial derived seeds.

    Rows are ordered by (n, trial_index) regardless of completion
    order; with ``out_path`` they are also written as CSV.  Identical
    inputs reproduce identical records except for the wall time.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    for n in n_values:
        if n < 3:
            raise ValueError(f"grid n values must be >= 3, got {n}")
    jobs = [
        (n, derive_seed(base_seed, n, t), t, y_factor, s2_l)
        for n in n_values
        for t in range(trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_trial_args, jobs, chunksize=4))
    else:
        records = [run_trial(*job) for job in jobs]
    if out_path is not None:
        write_csv(records, out_path)
    return records


def write_csv(records: Iterable[TrialRecord], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.csv_row())


def lht_growth_fit(records: Sequence[TrialRecord]) -> tuple[float, float]:
    """Least-squares fit of mean face count against log n.

    Needs at least 3 distinct n values with at least 30 trials each.
    Returns (intercept, slope).
    """
    by_n: dict[int, list[int]] = {}
    for rec in records:
        by_n.setdefault(rec.n, []).append(rec.lht)
    if len(by_n) < 3 or any(len(v) < 30 for v in by_n.values()):
        raise InsufficientData(
            "need >= 3 distinct n values with >= 30 trials each, got "
            + ", ".join(f"n={n}:{len(v)}" for n, v in sorted(by_n.items()))
        )
    xs = [math.log(n) for n in sorted(by_n)]
    ys = [statistics.fmean(by_n[n]) for n in sorted(by_n)]
    x_bar = statistics.fmean(xs)
    y_bar = statistics.fmean(ys)
    sxx = sum((x - x_bar) ** 2 for x in xs)
    sxy = sum((x - x_bar) * (y - y_bar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = y_bar - slope * x_bar
    return intercept, slope


def h_fraction_below(records: Sequence[TrialRecord], threshold: float) -> float:
    """Fraction of usable rows (single n) with h_upper below the threshold."""
    ns = {rec.n for rec in records}
    if len(ns) != 1:
        raise ValueError(f"records must share a single n, got {sorted(ns)}")
    usable = [rec for rec in records if rec.h_upper is not None]
    if not usable:
        raise NoUsableRows("no rows with a computed h_upper")
    return sum(1 for rec in usable if rec.h_upper < threshold) / len(usable)


def membership_fraction(
    records: Sequence[TrialRecord], epsilon_l: float, c: float
) -> float:
    """Fraction of rows passing the large-cusp proxy and the lht cap."""
    if not records:
        raise NoUsableRows("no records")
    hits = sum(
        1
        for rec in records
        if rec.min_degree > epsilon_l and rec.lht <= c * math.log(rec.n)
    )
    return hits / len(records)


def summarize(
    records: Sequence[TrialRecord], n: int, h_threshold: float = 2.0 / 3.0 + 0.05
) -> SummaryStats:
    rows = [rec for rec in records if rec.n == n]
    if not rows:
        raise NoUsableRows(f"no records at n={n}")
    usable = [rec for rec in rows if rec.h_upper is not None]
    lhts = [rec.lht for rec in rows]
    fraction = None
    if usable:
        fraction = sum(1 for rec in usable if rec.h_upper < h_threshold) / len(usable)
    return SummaryStats(
        n=n,
        trials=len(rows),
        usable=len(usable),
        excluded=len(rows) - len(usable),
        mean_lht=statistics.fmean(lhts),
        var_lht=statistics.pvariance(lhts) if len(lhts) > 1 else 0.0,
        h_threshold=h_threshold,
        fraction_h_below=fraction,
    )
