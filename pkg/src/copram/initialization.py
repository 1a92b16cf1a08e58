"""Spectral initialization for the plain and block-sparse solvers.

The initial estimate is built in four steps: estimate the signal power
from the measurement energy, score every coordinate (or block) with a
weighted marginal, keep the top-s coordinates (top-k blocks), and take
the scaled top singular vector of the weighted correlation matrix
restricted to that support.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ContractViolationError
from .kernels import marginals_kernel, weighted_gram_kernel
from .linalg import top_singular_vector
from .model import Signal

__all__ = [
    "InitEstimate",
    "signal_power_estimate",
    "marginals",
    "top_s_support",
    "block_marginals",
    "top_k_block_support",
    "spectral_estimate",
    "copram_init",
    "block_copram_init",
]


@dataclass(frozen=True)
class InitEstimate:
    """Initial iterate x0 (zero off support) with its support and scale."""

    x0: Signal
    support: np.ndarray
    phi: float


def top_indices(values, count):
    """Indices of the count largest entries, ascending; ties to lowest index."""
    order = np.argsort(-values, kind="stable")[:count]
    return np.sort(order)


def signal_power_estimate(y):
    """phi = sqrt(mean of y_i^2), an estimate of ||x*||."""
    y = np.asarray(y, dtype=np.float64)
    if y.size < 1:
        raise ContractViolationError("measurement vector is empty")
    return float(np.sqrt(np.mean(y**2)))


def marginals(A, y):
    """Per-coordinate scores M_jj = (1/m) sum_i y_i^2 A_ij^2."""
    y = np.asarray(y, dtype=np.float64)
    if A.shape[0] != y.size:
        raise ContractViolationError(
            f"row count {A.shape[0]} does not match measurement count {y.size}"
        )
    return marginals_kernel(np.asarray(A, dtype=np.float64), y**2)


def top_s_support(M, s):
    """Support estimate: coordinates of the s largest marginals."""
    M = np.asarray(M)
    if not 1 <= s <= M.size:
        raise ContractViolationError(f"s={s} out of range for n={M.size}")
    return top_indices(M, s)


def block_marginals(M, struct):
    """Per-block l2 aggregation of coordinate marginals.

    For b = 1 this returns the marginals unchanged (a copy), bit-exactly:
    sqrt of a square may drift by an ulp, so the degenerate case is
    special-cased.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.size != struct.n:
        raise ContractViolationError("marginal length does not match structure")
    if struct.b == 1:
        return np.abs(M)
    per_block = (M**2).reshape(struct.block_count, struct.b).sum(axis=1)
    return np.sqrt(per_block)


def top_k_block_support(BM, k, struct):
    """Coordinate support covered by the k largest block marginals."""
    BM = np.asarray(BM)
    if BM.size != struct.block_count:
        raise ContractViolationError("block marginal length does not match structure")
    if not 1 <= k <= struct.block_count:
        raise ContractViolationError(f"k={k} out of range for {struct.block_count} blocks")
    blocks = top_indices(BM, k)
    return struct.coords_of_blocks(blocks)


def spectral_estimate(A, y, support, phi):
    """Scaled top singular vector of the support-restricted correlation.

    Builds M_S = (1/m) sum_i y_i^2 a_{i,S} a_{i,S}^T over the selected
    columns, extracts its leading singular vector, embeds it at the
    support coordinates, and scales by phi.  A zero measurement vector
    yields the zero estimate (phi = 0) rather than an error.
    """
    support = np.asarray(support, dtype=np.intp)
    if support.size < 1:
        raise ContractViolationError("support must contain at least one coordinate")
    y = np.asarray(y, dtype=np.float64)
    A_sub = np.ascontiguousarray(np.asarray(A, dtype=np.float64)[:, support])
    M_S = weighted_gram_kernel(A_sub, y**2)
    # The descent stage only needs the direction to within the estimator's
    # statistical error, so a loose tolerance is plenty.  On unlucky draws
    # the top two weighted-gram eigenvalues nearly tie and the iteration
    # cannot separate them in any budget; the stalled iterate is then as
    # informative as either eigenvector, so accept it rather than raise.
    v = top_singular_vector(M_S, tol=1e-6, raise_on_stall=False)
    x0 = np.zeros(A.shape[1])
    x0[support] = phi * v
    return InitEstimate(x0=Signal(x0, support), support=support, phi=float(phi))


def copram_init(A, y, s):
    """Spectral initialization for plain s-sparse recovery."""
    phi = signal_power_estimate(y)
    M = marginals(A, y)
    support = top_s_support(M, s)
    return spectral_estimate(A, y, support, phi)


def block_copram_init(A, y, struct, k):
    """Spectral initialization with block-level support screening."""
    phi = signal_power_estimate(y)
    M = marginals(A, y)
    BM = block_marginals(M, struct)
    support = top_k_block_support(BM, k, struct)
    return spectral_estimate(A, y, support, phi)
