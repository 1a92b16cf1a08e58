"""Seeded Monte Carlo experiment engine producing CSV result tables.

A sweep is described by an ExperimentGrid; every (cell, trial) pair gets
its own seed derived from the master seed and the cell coordinates, so
results are independent of sweep composition and trivially parallel.
Wall time is measured around the solver call only, never around data
generation.
"""

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .exceptions import ConfigurationError, CsvIoError
from .metrics import DEFAULT_SUCCESS_THRESHOLD, recovery_verdict
from .model import (
    BlockStructure,
    gen_block_sparse_signal,
    gen_measurement_matrix,
    gen_powerlaw_signal,
    gen_sparse_signal,
    measure_noisy,
)
from .seeding import derive_seed
from .solver import SolverConfig, block_copram, copram

EXPERIMENT_KINDS = (
    "phase_transition",
    "block_sweep",
    "noise_sweep",
    "powerlaw_sweep",
    "single_recover",
)
ALGORITHMS = ("copram", "block_copram")

CSV_HEADER = (
    "experiment,algorithm,n,s,b,k,m,alpha,nsr,trials,"
    "recovery_probability,mean_relative_error,mean_wall_time_seconds,master_seed"
)

DEFAULT_MASTER_SEED = 1729

PRESETS = {
    "paper": {"n": 3000, "trials": 50, "m_values": tuple(range(200, 2001, 200))},
    "quick": {"n": 500, "trials": 20, "m_values": tuple(range(40, 401, 40))},
}


@dataclass(frozen=True)
class ExperimentGrid:
    """Monte Carlo campaign: sweep axes, trial count, and seeds."""

    kind: str
    algorithm: str = "copram"
    n: int = 3000
    s_values: Sequence[int] = (20,)
    m_values: Sequence[int] = (1000,)
    b: Optional[int] = None
    k: Optional[int] = None
    b_values: Sequence[int] = ()
    alpha_values: Sequence[float] = ()
    include_baseline: bool = True
    nsr_values: Sequence[float] = ()
    trials: int = 50
    master_seed: int = DEFAULT_MASTER_SEED
    success_threshold: float = DEFAULT_SUCCESS_THRESHOLD
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigurationError("kind", f"unknown experiment kind {self.kind!r}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError("algorithm", f"unknown algorithm {self.algorithm!r}")
        if self.trials < 1:
            raise ConfigurationError("trials", "at least one trial is required")
        if self.n < 1:
            raise ConfigurationError("n", "signal length must be positive")
        if not self.m_values:
            raise ConfigurationError("m", "at least one m value is required")
        if not self.s_values:
            raise ConfigurationError("s", "at least one s value is required")
        for m in self.m_values:
            if m < 1:
                raise ConfigurationError("m", f"m={m} must be positive")
            for s in self.s_values:
                if m < s:
                    raise ConfigurationError("m", f"m={m} is below the sparsity s={s}")
        for s in self.s_values:
            if not 1 <= s <= self.n:
                raise ConfigurationError("s", f"s={s} out of range for n={self.n}")
        for alpha in self.alpha_values:
            if alpha <= 1:
                raise ConfigurationError("alpha", f"alpha={alpha} must exceed 1")
        for nsr in self.nsr_values:
            if nsr < 0:
                raise ConfigurationError("nsr", f"nsr={nsr} must be nonnegative")
        if self.success_threshold <= 0:
            raise ConfigurationError("success_threshold", "threshold must be positive")
        blocked = self.algorithm == "block_copram" or self.b is not None
        if blocked:
            for b, s in self._block_pairs():
                if b < 1:
                    raise ConfigurationError("b", f"block length b={b} must be positive")
                if self.n % b != 0:
                    raise ConfigurationError("b", f"n={self.n} is not divisible by b={b}")
                if s % b != 0:
                    raise ConfigurationError("s", f"s={s} is not divisible by b={b}")

    def _block_pairs(self):
        bs = list(self.b_values) if self.b_values else ([self.b] if self.b else [])
        return [(b, s) for b in bs for s in self.s_values]


@dataclass(frozen=True)
class ResultRow:
    """One aggregated cell of a sweep, ready for CSV emission."""

    experiment: str
    algorithm: str
    n: int
    s: int
    b: Optional[int]
    k: Optional[int]
    m: int
    alpha: Optional[float]
    nsr: Optional[float]
    trials: int
    recovery_probability: float
    mean_relative_error: float
    mean_wall_time_seconds: float
    master_seed: int


def _run_trial(args):
    """One seeded trial; module-level so worker processes can pickle it."""
    (kind, algorithm, n, s, b, k, m, alpha, nsr, threshold, solver_cfg,
     trial_seed) = args
    signal_seed = derive_seed(trial_seed, "signal")
    matrix_seed = derive_seed(trial_seed, "matrix")
    noise_seed = derive_seed(trial_seed, "noise")

    if alpha is not None:
        x_true = gen_powerlaw_signal(n, s, alpha, signal_seed)
    elif b is not None:
        x_true = gen_block_sparse_signal(n, BlockStructure(n, b), k, signal_seed)
    else:
        x_true = gen_sparse_signal(n, s, signal_seed)

    A = gen_measurement_matrix(m, n, matrix_seed)
    sigma = math.sqrt(nsr) * x_true.norm() if nsr else 0.0
    y = measure_noisy(A, x_true, sigma, noise_seed)

    start = time.perf_counter()
    if algorithm == "block_copram":
        report = block_copram(A, y, BlockStructure(n, b), k, solver_cfg)
    else:
        report = copram(A, y, s, solver_cfg)
    elapsed = time.perf_counter() - start

    verdict = recovery_verdict(report.x_final, x_true, threshold)
    return verdict.success, verdict.relative_error, elapsed


def _trial_args(grid, *, s, m, b, k, alpha, nsr):
    for trial in range(grid.trials):
        trial_seed = derive_seed(
            grid.master_seed, grid.kind, grid.algorithm, grid.n, s,
            b if b is not None else -1, k if k is not None else -1,
            m, alpha, nsr, trial,
        )
        yield (grid.kind, grid.algorithm, grid.n, s, b, k, m, alpha, nsr,
               grid.success_threshold, grid.solver, trial_seed)


def run_cell(grid, *, s, m, b=None, k=None, alpha=None, nsr=None, pool=None):
    """Run all trials of one cell and aggregate them into a ResultRow."""
    if grid.algorithm == "block_copram" and (b is None or k is None):
        raise ConfigurationError("b", "block algorithm requires block parameters")
    args = list(_trial_args(grid, s=s, m=m, b=b, k=k, alpha=alpha, nsr=nsr))
    if pool is not None:
        outcomes = list(pool.map(_run_trial, args))
    else:
        outcomes = [_run_trial(a) for a in args]
    successes = sum(1 for ok, _, _ in outcomes if ok)
    return ResultRow(
        experiment=grid.kind,
        algorithm=grid.algorithm,
        n=grid.n,
        s=s,
        b=b,
        k=k,
        m=m,
        alpha=alpha,
        nsr=nsr,
        trials=grid.trials,
        recovery_probability=successes / grid.trials,
        mean_relative_error=float(np.mean([err for _, err, _ in outcomes])),
        mean_wall_time_seconds=float(np.mean([dt for _, _, dt in outcomes])),
        master_seed=grid.master_seed,
    )


def _with_pool(workers, body):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return body(pool)
    return body(None)


def run_phase_transition(grid, workers=1):
    """One row per (s, m) cell, in grid order."""
    def body(pool):
        rows = []
        for s in grid.s_values:
            b = grid.b
            k = s // b if b else None
            for m in grid.m_values:
                rows.append(run_cell(grid, s=s, m=m, b=b, k=k, pool=pool))
        return rows
    return _with_pool(workers, body)


def run_block_sweep(grid, workers=1):
    """One row per (b, m) cell at fixed sparsity, in grid order."""
    if not grid.b_values:
        raise ConfigurationError("b", "block sweep requires a list of block lengths")
    def body(pool):
        rows = []
        for b in grid.b_values:
            for s in grid.s_values:
                k = s // b
                for m in grid.m_values:
                    cell_grid = replace(grid, b_values=())
                    rows.append(run_cell(cell_grid, s=s, m=m, b=b, k=k, pool=pool))
        return rows
    return _with_pool(workers, body)


def run_noise_sweep(grid, workers=1):
    """One row per (m, NSR) cell at fixed signal shape, in grid order."""
    if not grid.nsr_values:
        raise ConfigurationError("nsr", "noise sweep requires a list of NSR values")
    def body(pool):
        rows = []
        for s in grid.s_values:
            k = s // grid.b if grid.b else None
            for m in grid.m_values:
                for nsr in grid.nsr_values:
                    rows.append(
                        run_cell(grid, s=s, m=m, b=grid.b, k=k, nsr=nsr, pool=pool)
                    )
        return rows
    return _with_pool(workers, body)


def run_powerlaw_sweep(grid, workers=1):
    """Rows per (alpha, m), preceded by a random-normal baseline per m."""
    def body(pool):
        rows = []
        for s in grid.s_values:
            if grid.include_baseline:
                for m in grid.m_values:
                    rows.append(run_cell(grid, s=s, m=m, pool=pool))
            for alpha in grid.alpha_values:
                for m in grid.m_values:
                    rows.append(run_cell(grid, s=s, m=m, alpha=alpha, pool=pool))
        return rows
    return _with_pool(workers, body)


def _format_field(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_csv_rows(handle, rows):
    """Write the header and rows to an open text handle."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in rows:
        writer.writerow(
            _format_field(v)
            for v in (
                row.experiment, row.algorithm, row.n, row.s, row.b,
                row.k, row.m, row.alpha, row.nsr, row.trials,
                row.recovery_probability, row.mean_relative_error,
                row.mean_wall_time_seconds, row.master_seed,
            )
        )


def emit_csv(rows, path):
    """Write rows in the fixed column order; empty string for absent axes."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            write_csv_rows(handle, rows)
    except OSError as exc:
        raise CsvIoError(str(path), str(exc)) from exc
