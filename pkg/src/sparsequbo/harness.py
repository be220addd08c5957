"""Experiment runner: sweep one problem axis, run all methods with oracle
tuning, aggregate errors over repetitions, write CSV + SVG outputs.

Every cell (sweep value x repetition) is seeded by a stable hash of the
base seed and the cell coordinates, so cells are independent of execution
order and the whole run is reproducible byte for byte. Wall-clock timings
are kept out of ``raw_rows.csv`` (they go to ``timings.csv``) so repeated
runs of the same grid produce identical bytes.
"""
from __future__ import annotations

import csv
import datetime
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .baselines import lasso_ista, omp
from .encoding import FixedPointFormat
from .evaluation import (
    DEFAULT_ZERO_TOL,
    METRICS,
    oracle_tune_multi,
    reconstruction_error,
    support_error,
)
from .instances import Instance, make_instance
from .qubo import assemble_total, build_l0_qubo, build_l2_qubo
from .rng import stable_hash64
from .solvers import (
    MAX_SUPPORTS,
    default_schedule,
    sa_backend_name,
    solve_exhaustive_sparse,
    solve_sa,
)
from .svgplot import line_chart

__all__ = [
    "ExperimentGrid",
    "ResultRow",
    "CellFailure",
    "run_experiment",
    "aggregate",
    "emit_outputs",
    "RAW_ROWS_FILENAME",
]

METHODS = ("qubo_sa", "exhaustive", "omp", "lasso")
SWEEP_AXES = ("M", "sigma", "k")
WORKERS_ENV_VAR = "SPARSEQUBO_WORKERS"

RAW_ROWS_FILENAME = "raw_rows.csv"
RAW_COLUMNS = [
    "method",
    "sweep_value",
    "repetition",
    "seed",
    "tuned_for",
    "tuned_param",
    "reconstruction_error",
    "support_error",
    "energy",
]


@dataclass(frozen=True)
class ExperimentGrid:
    """Full specification of one sweep experiment."""

    N: int
    P: int
    sweep: str
    values: tuple
    repetitions: int
    methods: tuple
    base_seed: int
    c_min: float = 0.0
    d: float = 1.0
    M: int | None = None
    sigma: float | None = None
    k: int | None = None
    k_max: int = 6
    lasso_grid_size: int = 20
    lasso_grid_min: float = 1e-4
    lasso_max_iters: int = 2000
    lasso_tol: float = 1e-8
    qubo_grid_size: int = 20
    qubo_grid_min: float = 1e-3
    sa_sweeps: int = 2000
    sa_restarts: int = 32
    coherence_alpha: float = 0.02
    coherence_iters: int = 2000
    zero_tol: float = DEFAULT_ZERO_TOL
    max_supports: int = MAX_SUPPORTS

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.sweep not in SWEEP_AXES:
            raise ValueError(f"sweep must be one of {SWEEP_AXES}, got {self.sweep!r}")
        if not self.values:
            raise ValueError("sweep values must not be empty")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if not self.methods:
            raise ValueError("method list must not be empty")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}; expected {METHODS}")
        if getattr(self, self.sweep) is not None:
            raise ValueError(f"swept axis {self.sweep!r} must not also be fixed")
        for axis in SWEEP_AXES:
            if axis != self.sweep and getattr(self, axis) is None:
                raise ValueError(f"fixed axis {axis!r} requires a value")
        if "exhaustive" in self.methods:
            worst_n = math.comb(self.N, min(self.k_max, self.N))
            if worst_n > self.max_supports:
                raise ValueError(
                    f"exhaustive method infeasible: C({self.N}, {self.k_max}) "
                    f"= {worst_n} exceeds {self.max_supports}"
                )
        # Validates representability of zero up front.
        self.fmt()

    def fmt(self) -> FixedPointFormat:
        return FixedPointFormat.uniform(self.N, self.c_min, self.d, self.P)

    def cell_params(self, value) -> tuple[int, float, int]:
        """(M, sigma, k) of the cell at one sweep value."""
        params = {"M": self.M, "sigma": self.sigma, "k": self.k}
        params[self.sweep] = value
        return int(params["M"]), float(params["sigma"]), int(params["k"])

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["values"] = list(self.values)
        d["methods"] = list(self.methods)
        return d

    @classmethod
    def from_json_dict(cls, spec: dict) -> "ExperimentGrid":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(spec) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**spec)

    @classmethod
    def from_json_file(cls, path) -> "ExperimentGrid":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class ResultRow:
    """One method's oracle-tuned outcome on one cell, for one target metric."""

    method: str
    sweep_value: float
    repetition: int
    seed: int
    tuned_for: str
    tuned_param: float
    reconstruction_error: float
    support_error: int
    energy: float | None
    wall_time: float

    def csv_values(self) -> list[str]:
        return [
            self.method,
            repr(float(self.sweep_value)),
            str(self.repetition),
            str(self.seed),
            self.tuned_for,
            repr(float(self.tuned_param)),
            repr(float(self.reconstruction_error)),
            str(self.support_error),
            "" if self.energy is None else repr(float(self.energy)),
        ]

    @classmethod
    def from_csv_values(cls, values: list[str]) -> "ResultRow":
        return cls(
            method=values[0],
            sweep_value=float(values[1]),
            repetition=int(values[2]),
            seed=int(values[3]),
            tuned_for=values[4],
            tuned_param=float(values[5]),
            reconstruction_error=float(values[6]),
            support_error=int(values[7]),
            energy=float(values[8]) if values[8] else None,
            wall_time=float("nan"),
        )


@dataclass(frozen=True)
class CellFailure:
    sweep_value: float
    repetition: int
    method: str
    message: str


def _log_grid(lo: float, hi: float, size: int) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    return np.geomspace(lo, hi, size)


def _method_runner(method: str, instance: Instance, grid: ExperimentGrid, cell_seed: int):
    """(parameter grid, param -> x_hat, param -> energy or None) for one method."""
    A, b = instance.A, instance.b
    if method == "omp":
        k_hi = min(grid.k_max, min(A.shape))
        return list(range(1, k_hi + 1)), lambda kk: omp(A, b, int(kk)), None
    if method == "exhaustive":
        k_hi = min(grid.k_max, A.shape[1])
        for kk in range(1, k_hi + 1):
            if math.comb(A.shape[1], kk) > grid.max_supports:
                raise ValueError(
                    f"support enumeration for k={kk} exceeds {grid.max_supports}"
                )
        return (
            list(range(1, k_hi + 1)),
            lambda kk: solve_exhaustive_sparse(A, b, int(kk), grid.max_supports),
            None,
        )
    if method == "lasso":
        hi = 2.0 * float(np.abs(A.T @ b).max())
        lam_grid = _log_grid(grid.lasso_grid_min, hi, grid.lasso_grid_size)
        return (
            list(lam_grid),
            lambda lam: lasso_ista(
                A, b, lam, max_iters=grid.lasso_max_iters, tol=grid.lasso_tol
            ),
            None,
        )
    if method == "qubo_sa":
        fmt = grid.fmt()
        l2 = build_l2_qubo(A, b, fmt)
        l0 = build_l0_qubo(fmt)
        lam_grid = _log_grid(grid.qubo_grid_min, float(b @ b), grid.qubo_grid_size)
        energies: dict[float, float] = {}

        def run(lam):
            problem = assemble_total(l2, l0, lam)
            schedule = default_schedule(
                problem,
                sweeps=grid.sa_sweeps,
                restarts=grid.sa_restarts,
                seed=stable_hash64(cell_seed, "sa", float(lam)),
            )
            result = solve_sa(problem, schedule)
            energies[float(lam)] = result.energy
            return result.x_hat

        return list(lam_grid), run, energies
    raise ValueError(f"unknown method {method!r}")


def _run_cell(grid: ExperimentGrid, value, rep: int):
    """All method rows for one (sweep value, repetition) cell."""
    M, sigma, k = grid.cell_params(value)
    cell_seed = stable_hash64(grid.base_seed, float(value), rep)
    rows: list[ResultRow] = []
    failures: list[CellFailure] = []
    try:
        instance = make_instance(
            M,
            grid.N,
            k,
            sigma,
            grid.fmt(),
            seed=cell_seed,
            alpha=grid.coherence_alpha,
            descent_iters=grid.coherence_iters,
        )
    except ValueError as exc:
        for method in grid.methods:
            failures.append(CellFailure(float(value), rep, method, str(exc)))
        return rows, failures
    for method in grid.methods:
        t0 = time.perf_counter()
        try:
            param_grid, fn, energies = _method_runner(method, instance, grid, cell_seed)
            tuned = oracle_tune_multi(fn, param_grid, instance, METRICS, grid.zero_tol)
        except ValueError as exc:
            failures.append(CellFailure(float(value), rep, method, str(exc)))
            continue
        wall = time.perf_counter() - t0
        for metric in METRICS:
            res = tuned[metric]
            rows.append(
                ResultRow(
                    method=method,
                    sweep_value=float(value),
                    repetition=rep,
                    seed=cell_seed,
                    tuned_for=metric,
                    tuned_param=float(res.best_param),
                    reconstruction_error=reconstruction_error(
                        instance.x_true, res.best_estimate
                    ),
                    support_error=support_error(
                        instance.x_true, res.best_estimate, grid.zero_tol
                    ),
                    energy=None if energies is None else energies.get(res.best_param),
                    wall_time=wall,
                )
            )
    return rows, failures


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get(WORKERS_ENV_VAR)
    return max(1, int(env)) if env else 1


def run_experiment(
    grid: ExperimentGrid, workers: int | None = None
) -> tuple[list[ResultRow], list[CellFailure]]:
    """Run every cell of the grid; fully deterministic given the grid.

    Failures (e.g. combinatorial guards) are collected per cell and method
    while the run continues. Worker count comes from the argument, else the
    SPARSEQUBO_WORKERS environment variable, else 1; results are
    order-normalized so parallelism never changes the output.
    """
    cells = [(value, rep) for value in grid.values for rep in range(grid.repetitions)]
    rows: list[ResultRow] = []
    failures: list[CellFailure] = []
    n_workers = _worker_count(workers)
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            outcomes = list(pool.map(_run_cell, *zip(*[(grid, v, r) for v, r in cells])))
    else:
        outcomes = [_run_cell(grid, v, r) for v, r in cells]
    for cell_rows, cell_failures in outcomes:
        rows.extend(cell_rows)
        failures.extend(cell_failures)
    value_order = {float(v): i for i, v in enumerate(grid.values)}
    rows.sort(
        key=lambda r: (value_order[r.sweep_value], r.repetition, r.method, r.tuned_for)
    )
    failures.sort(key=lambda f: (value_order[f.sweep_value], f.repetition, f.method))
    return rows, failures


@dataclass(frozen=True)
class AggregateRow:
    method: str
    sweep_value: float
    metric: str
    mean: float
    stderr: float
    count: int


def aggregate(rows: list[ResultRow]) -> list[AggregateRow]:
    """Mean and standard error (stddev / sqrt(R)) per method and sweep value,
    for each metric tuned toward itself."""
    if not rows:
        raise ValueError("no rows to aggregate")
    groups: dict[tuple, list[float]] = {}
    for row in rows:
        err = (
            row.reconstruction_error
            if row.tuned_for == "reconstruction"
            else float(row.support_error)
        )
        groups.setdefault((row.method, row.sweep_value, row.tuned_for), []).append(err)
    out = []
    for (method, value, metric), errs in sorted(groups.items()):
        n = len(errs)
        mean = float(np.mean(errs))
        stderr = 0.0 if n < 2 else float(np.std(errs, ddof=1) / math.sqrt(n))
        out.append(AggregateRow(method, value, metric, mean, stderr, n))
    return out


def _write_csv(path, header: list[str], rows_values) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for values in rows_values:
        writer.writerow(values)
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(buf.getvalue())


def read_raw_rows(path) -> list[ResultRow]:
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != RAW_COLUMNS:
            raise ValueError(f"unexpected columns in {path}: {header}")
        return [ResultRow.from_csv_values(values) for values in reader]


def emit_outputs(
    rows: list[ResultRow],
    aggregates: list[AggregateRow],
    out_dir,
    grid: ExperimentGrid | None = None,
    failures: list[CellFailure] | None = None,
) -> list[str]:
    """Write raw_rows.csv, timings.csv, aggregates.csv, one SVG chart per
    metric, and a manifest. Returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    path = os.path.join(out_dir, RAW_ROWS_FILENAME)
    _write_csv(path, RAW_COLUMNS, (r.csv_values() for r in rows))
    written.append(path)

    path = os.path.join(out_dir, "timings.csv")
    _write_csv(
        path,
        ["method", "sweep_value", "repetition", "tuned_for", "wall_time_s"],
        (
            [r.method, repr(float(r.sweep_value)), str(r.repetition), r.tuned_for,
             f"{r.wall_time:.6f}"]
            for r in rows
        ),
    )
    written.append(path)

    path = os.path.join(out_dir, "aggregates.csv")
    _write_csv(
        path,
        ["method", "sweep_value", "metric", "mean", "stderr", "count"],
        (
            [a.method, repr(float(a.sweep_value)), a.metric, repr(float(a.mean)),
             repr(float(a.stderr)), str(a.count)]
            for a in aggregates
        ),
    )
    written.append(path)

    x_label = grid.sweep if grid is not None else "sweep value"
    for metric, pretty in (
        ("reconstruction", "reconstruction error"),
        ("support", "support error"),
    ):
        series: dict[str, list] = {}
        for a in aggregates:
            if a.metric == metric:
                series.setdefault(a.method, []).append((a.sweep_value, a.mean, a.stderr))
        path = os.path.join(out_dir, f"plot_{metric}_error.svg")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(line_chart(series, f"mean {pretty}", x_label, pretty))
        written.append(path)

    manifest = {
        "version": __version__,
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "sa_backend": sa_backend_name(),
        "grid": None if grid is None else grid.to_json_dict(),
        "failures": [asdict(f) for f in (failures or [])],
        "row_count": len(rows),
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(path)
    return written
