"""Hot numerical kernels with a numba fast path and a numpy fallback.

The two O(m*n) / O(m*s^2) inner loops of the spectral initialization are
implemented twice: as numba ``@njit`` routines that fuse the elementwise
squaring with the reduction (no m-by-n temporary), and as vectorized
numpy expressions.  The active backend is chosen once at import time:
numba is used when it imports cleanly and the environment variable
``COPRAM_NO_NUMBA`` is unset/empty; otherwise the numpy path is used.
``BACKEND`` records the choice ("numba" or "numpy").

Both backends compute the same sums; results may differ in the last few
ulps because the summation order differs.  Within one backend results
are bit-deterministic: the loops are serial and the numpy reductions use
a fixed pairwise order.
"""

import os

import numpy as np

if os.environ.get("COPRAM_NO_NUMBA"):
    HAS_NUMBA = False
else:
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


def _marginals_numpy(A, y_sq):
    m = A.shape[0]
    return (y_sq @ (A * A)) / m


def _weighted_gram_numpy(A_sub, y_sq):
    m = A_sub.shape[0]
    return (A_sub * y_sq[:, None]).T @ A_sub / m


if HAS_NUMBA:

    @njit(cache=True)
    def _marginals_numba(A, y_sq):
        m, n = A.shape
        out = np.zeros(n)
        for i in range(m):
            w = y_sq[i]
            for j in range(n):
                out[j] += w * A[i, j] * A[i, j]
        return out / m

    @njit(cache=True)
    def _weighted_gram_numba(A_sub, y_sq):
        m, t = A_sub.shape
        out = np.zeros((t, t))
        for i in range(m):
            w = y_sq[i]
            for a in range(t):
                wa = w * A_sub[i, a]
                for b in range(t):
                    out[a, b] += wa * A_sub[i, b]
        return out / m


def marginals_kernel(A, y_sq):
    """Per-coordinate weighted column power: out_j = (1/m) sum_i y2_i A_ij^2."""
    if HAS_NUMBA:
        return _marginals_numba(A, y_sq)
    return _marginals_numpy(A, y_sq)


def weighted_gram_kernel(A_sub, y_sq):
    """Weighted gram matrix: (1/m) sum_i y2_i a_i a_i^T over the given columns."""
    if HAS_NUMBA:
        return _weighted_gram_numba(A_sub, y_sq)
    return _weighted_gram_numpy(A_sub, y_sq)
