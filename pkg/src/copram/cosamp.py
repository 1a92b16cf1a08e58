"""Warm-started CoSaMP and its block-structured variant.

Both solvers operate on the (1/sqrt(m))-scaled system the caller
provides.  Each iteration forms a proxy from the current residual,
enlarges the candidate support (top-2s coordinates, or top-2k blocks, of
the proxy, united with the current support), least-squares fits on the
candidates, prunes back to s coordinates (k blocks), and refreshes the
residual from the pruned estimate.  After the loop the estimate is
re-solved on the final support.

The residual always corresponds to the current estimate, r = u - Phi x;
the warm start therefore enters both through the initial residual and
through the support union.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ContractViolationError
from .initialization import top_indices
from .linalg import least_squares
from .model import Signal, as_vector

DEFAULT_INNER_ITERS = 5
DEFAULT_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class CosampConfig:
    """Inner-solver knobs: iteration cap L and relative residual tolerance."""

    max_inner_iters: int = DEFAULT_INNER_ITERS
    residual_tol: float = DEFAULT_RESIDUAL_TOL

    def __post_init__(self):
        if self.max_inner_iters < 1:
            raise ContractViolationError("max_inner_iters must be at least 1")
        if self.residual_tol < 0:
            raise ContractViolationError("residual_tol must be nonnegative")


def _restricted_residual(Phi, u, x, support):
    if support.size == 0:
        return u.copy()
    return u - Phi[:, support] @ x[support]


def _check_system(Phi, u, x0):
    if Phi.ndim != 2 or u.ndim != 1 or Phi.shape[0] != u.size:
        raise ContractViolationError(
            f"system shapes do not align: {Phi.shape} vs {u.shape}"
        )
    if x0.size != Phi.shape[1]:
        raise ContractViolationError(
            f"warm start length {x0.size} does not match {Phi.shape[1]} columns"
        )


def cosamp(Phi, u, s, x_init, cfg=None):
    """Best s-sparse fit to Phi x = u, warm-started at x_init."""
    cfg = cfg or CosampConfig()
    Phi = np.asarray(Phi, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    x = as_vector(x_init).copy()
    _check_system(Phi, u, x)
    n = Phi.shape[1]
    if not 1 <= s <= n:
        raise ContractViolationError(f"s={s} out of range for n={n}")

    support = np.flatnonzero(x)
    r = _restricted_residual(Phi, u, x, support)
    u_norm = np.linalg.norm(u)
    for _ in range(cfg.max_inner_iters):
        if np.linalg.norm(r) <= cfg.residual_tol * u_norm:
            break
        proxy = Phi.T @ r
        omega = top_indices(np.abs(proxy), min(2 * s, n))
        candidates = np.union1d(omega, np.flatnonzero(x))
        w = least_squares(Phi[:, candidates], u)
        w_full = np.zeros(n)
        w_full[candidates] = w
        support = top_indices(np.abs(w_full), s)
        x = np.zeros(n)
        x[support] = w_full[support]
        r = _restricted_residual(Phi, u, x, support)

    x = np.zeros(n)
    x[support] = least_squares(Phi[:, support], u) if support.size else 0.0
    return Signal(x, support)


def block_cosamp(Phi, u, struct, k, x_init, cfg=None):
    """Best k-block-sparse fit to Phi x = u, warm-started at x_init."""
    cfg = cfg or CosampConfig()
    Phi = np.asarray(Phi, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    x = as_vector(x_init).copy()
    _check_system(Phi, u, x)
    n = Phi.shape[1]
    if struct.n != n:
        raise ContractViolationError("block structure does not match system width")
    nb = struct.block_count
    if not 1 <= k <= nb:
        raise ContractViolationError(f"k={k} out of range for {nb} blocks")

    def block_support(vec, count):
        # For b = 1 the block norm is plain magnitude; np.abs keeps the
        # ranking bit-identical to the coordinate solver's.
        if struct.b == 1:
            norms = np.abs(vec)
        else:
            norms = np.sqrt((vec**2).reshape(nb, struct.b).sum(axis=1))
        return struct.coords_of_blocks(top_indices(norms, count))

    support = np.flatnonzero(x)
    r = _restricted_residual(Phi, u, x, support)
    u_norm = np.linalg.norm(u)
    for _ in range(cfg.max_inner_iters):
        if np.linalg.norm(r) <= cfg.residual_tol * u_norm:
            break
        proxy = Phi.T @ r
        omega = block_support(proxy, min(2 * k, nb))
        candidates = np.union1d(omega, np.flatnonzero(x))
        w = least_squares(Phi[:, candidates], u)
        w_full = np.zeros(n)
        w_full[candidates] = w
        support = block_support(w_full, k)
        x = np.zeros(n)
        x[support] = w_full[support]
        r = _restricted_residual(Phi, u, x, support)

    x = np.zeros(n)
    x[support] = least_squares(Phi[:, support], u) if support.size else 0.0
    return Signal(x, support)
