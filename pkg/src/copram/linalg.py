"""Minimal dense linear algebra used by the solvers.

Matrices are plain 2-D float64 numpy arrays (row-major).  Only three
operations are needed: dense matrix-vector products, the top singular
vector of a small symmetric PSD matrix, and least-squares solves on
column subsets of the scaled measurement matrix.
"""

import numpy as np
from scipy.linalg import lstsq as _lstsq

from .exceptions import ContractViolationError, ConvergenceError

DEFAULT_POWER_TOL = 1e-10
DEFAULT_POWER_MAX_ITER = 1000


def matvec(M, v):
    """Dense product M @ v with an explicit dimension check."""
    M = np.asarray(M, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if M.ndim != 2 or v.ndim != 1 or M.shape[1] != v.shape[0]:
        raise ContractViolationError(
            f"matvec shapes do not align: {M.shape} @ {v.shape}"
        )
    return M @ v


def top_singular_vector(M, tol=DEFAULT_POWER_TOL, max_iter=DEFAULT_POWER_MAX_ITER,
                        raise_on_stall=True):
    """Leading eigenvector of a symmetric PSD matrix by power iteration.

    Returns a unit vector v with residual ||Mv - (v'Mv) v|| <= tol*||M||_F,
    starting from the normalized all-ones vector so runs are reproducible.
    If the iteration stalls on a zero product (start vector in the null
    space) the start is nudged by a fixed cosine pattern.  The sign is
    canonicalized so the largest-magnitude entry is positive.

    When the residual target is not met within max_iter (near-tied leading
    eigenvalues make the ratio arbitrarily slow), the default is to raise
    a ConvergenceError carrying the last residual.  With
    raise_on_stall=False the final iterate is returned instead; it is a
    unit vector close to the span of the dominant eigenvalue cluster,
    which is all a caller needs when the top directions are statistically
    interchangeable.

    For a symmetric PSD matrix the top singular vector and top eigenvector
    coincide, which is why an eigen iteration suffices.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got {M.shape}")
    if tol <= 0:
        raise ContractViolationError("tol must be positive")
    n = M.shape[0]
    if not np.allclose(M, M.T, atol=1e-9, rtol=0.0):
        raise ContractViolationError("matrix is not symmetric within 1e-9")

    scale = np.linalg.norm(M, "fro")
    v = np.full(n, 1.0 / np.sqrt(n))
    residual = None
    for _ in range(max_iter):
        Mv = M @ v
        norm = np.linalg.norm(Mv)
        if norm <= 1e-14 * scale:
            if scale == 0.0:
                # zero matrix: every unit vector satisfies the contract
                return _canonical_sign(v)
            # v is (numerically) in the null space of a nonzero matrix,
            # where the residual test would accept a bottom eigenvector;
            # nudge the start off with a fixed pattern and renormalize.
            v = v + np.cos(np.arange(1, n + 1))
            v /= np.linalg.norm(v)
            continue
        rayleigh = v @ Mv
        residual = np.linalg.norm(Mv - rayleigh * v)
        if residual <= tol * scale:
            return _canonical_sign(v)
        v = Mv / norm
    if raise_on_stall:
        raise ConvergenceError(
            f"power iteration did not reach tol={tol:g} within {max_iter} "
            f"iterations (last residual {residual:.3e})",
            residual=residual,
        )
    return _canonical_sign(v)


def _canonical_sign(v):
    lead = np.argmax(np.abs(v))
    return -v if v[lead] < 0 else v.copy()


def least_squares(Phi_sub, u):
    """Minimum-norm least-squares solution of min_w ||Phi_sub w - u||.

    Uses LAPACK's SVD-based solver (gelsd), which returns the
    minimum-norm solution for rank-deficient and underdetermined systems
    alike; the pivoted-QR driver only guarantees a basic solution when
    columns are exactly dependent.
    """
    Phi_sub = np.asarray(Phi_sub, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if Phi_sub.ndim != 2 or u.ndim != 1 or Phi_sub.shape[0] != u.shape[0]:
        raise ContractViolationError(
            f"least_squares shapes do not align: {Phi_sub.shape} vs {u.shape}"
        )
    w, _, _, _ = _lstsq(Phi_sub, u, lapack_driver="gelsd", check_finite=False)
    return w
