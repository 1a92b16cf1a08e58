"""Sign-ambiguity-aware distances and the recovery success rule.

Magnitude measurements cannot distinguish x from -x, so all distances
are taken as the minimum over the global sign flip.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ContractViolationError
from .model import as_vector

DEFAULT_SUCCESS_THRESHOLD = 0.05


def sign_of(x):
    """Sign with the convention sign_of(0) = 0."""
    if not np.isfinite(x):
        raise ContractViolationError("sign_of requires a finite value")
    if x > 0:
        return 1.0
    if x < 0:
        return -1.0
    return 0.0


def dist_op(x1, x2):
    """min(||x1 - x2||, ||x1 + x2||): distance up to global sign."""
    v1 = as_vector(x1)
    v2 = as_vector(x2)
    if v1.shape != v2.shape:
        raise ContractViolationError(f"length mismatch: {v1.shape} vs {v2.shape}")
    return float(min(np.linalg.norm(v1 - v2), np.linalg.norm(v1 + v2)))


@dataclass(frozen=True)
class RecoveryVerdict:
    relative_error: float
    success: bool
    threshold: float


def recovery_verdict(x_hat, x_true, threshold=DEFAULT_SUCCESS_THRESHOLD):
    """Relative error dist_op/||x_true|| and whether it beats the threshold."""
    truth = as_vector(x_true)
    truth_norm = np.linalg.norm(truth)
    if truth_norm == 0:
        raise ContractViolationError("true signal must be nonzero")
    relative_error = dist_op(x_hat, x_true) / truth_norm
    return RecoveryVerdict(
        relative_error=float(relative_error),
        success=bool(relative_error < threshold),
        threshold=float(threshold),
    )
