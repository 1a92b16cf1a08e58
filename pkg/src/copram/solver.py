"""Outer alternating-minimization loops for sparse phase retrieval.

Starting from the spectral initialization, each round estimates the
measurement signs from the current iterate and then solves the resulting
sparse linear system with the warm-started inner solver.  The loop runs
a fixed number of rounds with an early exit once consecutive iterates
agree to 1e-12.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .cosamp import CosampConfig, block_cosamp, cosamp
from .exceptions import ContractViolationError
from .initialization import block_copram_init, copram_init
from .metrics import dist_op
from .model import Signal, as_vector

DEFAULT_OUTER_ITERS = 30
ITERATE_TOL = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """Outer-loop knobs; sparsity parameters are passed per call."""

    outer_iters: int = DEFAULT_OUTER_ITERS
    cosamp: CosampConfig = field(default_factory=CosampConfig)
    track_trace: bool = False

    def __post_init__(self):
        if self.outer_iters < 1:
            raise ContractViolationError("outer_iters must be at least 1")


@dataclass(frozen=True)
class SolverReport:
    """Final estimate plus optional convergence diagnostics.

    dist_trace holds dist_op(x^t, x*) for t = 0..iterations_run when a
    ground truth was supplied; residual_trace holds || |A x^t| - y || at
    the same points when tracing is enabled.
    """

    x_final: Signal
    iterations_run: int
    dist_trace: Optional[list] = None
    residual_trace: Optional[list] = None


class ClusteredPlan(NamedTuple):
    """Uniform-block parameters that simulate a clustered-sparsity model."""

    block_sparsity: int
    block_length: int


def phase_estimate(A, x):
    """Measurement signs p_i = sign(<a_i, x>), with sign(0) = 0."""
    values = as_vector(x)
    if A.shape[1] != values.size:
        raise ContractViolationError(
            f"matrix columns {A.shape[1]} do not match signal length {values.size}"
        )
    return np.sign(A @ values)


def _alternate(A, y, x0, inner_step, cfg, x_true):
    """Shared outer loop: phase estimate, inner solve, convergence checks."""
    m = A.shape[0]
    Phi = A / math.sqrt(m)
    scale = 1.0 / math.sqrt(m)
    truth = as_vector(x_true) if x_true is not None else None

    dist_trace = [] if truth is not None else None
    residual_trace = [] if cfg.track_trace else None

    def record(values):
        if dist_trace is not None:
            dist_trace.append(dist_op(values, truth))
        if residual_trace is not None:
            residual_trace.append(float(np.linalg.norm(np.abs(A @ values) - y)))

    x = x0
    record(x.values)
    iterations = 0
    for _ in range(cfg.outer_iters):
        supp = x.declared_support
        z = A[:, supp] @ x.values[supp] if supp.size else np.zeros(m)
        u = (np.sign(z) * y) * scale
        x_next = inner_step(Phi, u, x.values)
        iterations += 1
        record(x_next.values)
        converged = dist_op(x_next.values, x.values) <= ITERATE_TOL
        x = x_next
        if converged:
            break
    return SolverReport(
        x_final=x,
        iterations_run=iterations,
        dist_trace=dist_trace,
        residual_trace=residual_trace,
    )


def copram(A, y, s, cfg=None, x_true=None, x0_override=None):
    """Recover an s-sparse signal from magnitudes y = |A x*|."""
    cfg = cfg or SolverConfig()
    A = np.asarray(A, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x0_override is not None:
        values = as_vector(x0_override)
        x0 = Signal(values, np.flatnonzero(values))
    else:
        x0 = copram_init(A, y, s).x0

    def inner_step(Phi, u, x_values):
        return cosamp(Phi, u, s, x_values, cfg.cosamp)

    return _alternate(A, y, x0, inner_step, cfg, x_true)


def block_copram(A, y, struct, k, cfg=None, x_true=None, x0_override=None):
    """Recover a k-block-sparse signal from magnitudes y = |A x*|."""
    cfg = cfg or SolverConfig()
    A = np.asarray(A, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x0_override is not None:
        values = as_vector(x0_override)
        x0 = Signal(values, np.flatnonzero(values))
    else:
        x0 = block_copram_init(A, y, struct, k).x0

    def inner_step(Phi, u, x_values):
        return block_cosamp(Phi, u, struct, k, x_values, cfg.cosamp)

    return _alternate(A, y, x0, inner_step, cfg, x_true)


def clustered_sparsity_frontend(s, k_clusters):
    """Uniform-block parameters simulating s nonzeros in k_clusters bursts.

    A signal with at most k_clusters variable-length clusters can be
    treated as uniformly block sparse at triple the block sparsity; the
    block length is rounded up, with any length padding left to the
    caller.
    """
    if k_clusters < 1:
        raise ContractViolationError("k_clusters must be at least 1")
    if s < k_clusters:
        raise ContractViolationError("s must be at least k_clusters")
    block_sparsity = 3 * k_clusters
    block_length = math.ceil(s / block_sparsity)
    return ClusteredPlan(block_sparsity=block_sparsity, block_length=block_length)
