"""Ground-truth signals, Gaussian measurement ensembles, and observations.

Signals are unit-norm real vectors with a known support structure: plain
s-sparse, block-sparse (support is a union of whole uniform blocks), or
s-sparse with squared coefficients following an exact power-law decay.
Measurements are magnitude-only, y_i = |<a_i, x>|, optionally corrupted
by additive Gaussian noise.  Every generator is a pure function of its
integer seed.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ContractViolationError


@dataclass(frozen=True)
class BlockStructure:
    """Partition of {0..n-1} into contiguous blocks of uniform length b."""

    n: int
    b: int

    def __post_init__(self):
        if self.n < 1 or self.b < 1:
            raise ContractViolationError("n and b must be positive")
        if self.n % self.b != 0:
            raise ContractViolationError(
                f"signal length {self.n} is not divisible by block length {self.b}"
            )

    @property
    def block_count(self):
        return self.n // self.b

    def coords_of_blocks(self, block_indices):
        """Coordinate indices covered by the given blocks, ascending."""
        blocks = np.asarray(block_indices, dtype=np.intp)
        if blocks.size and (blocks.min() < 0 or blocks.max() >= self.block_count):
            raise ContractViolationError("block index out of range")
        coords = (blocks[:, None] * self.b + np.arange(self.b)).ravel()
        return np.sort(coords)


@dataclass(frozen=True)
class Signal:
    """A real vector together with its declared support."""

    values: np.ndarray
    declared_support: np.ndarray = field(default_factory=lambda: np.empty(0, np.intp))

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        support = np.asarray(self.declared_support, dtype=np.intp)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "declared_support", support)
        if values.ndim != 1 or values.size < 1:
            raise ContractViolationError("signal must be a nonempty 1-D vector")
        if support.size:
            off = np.ones(values.size, dtype=bool)
            off[support] = False
            if np.any(values[off] != 0.0):
                raise ContractViolationError(
                    "signal has nonzeros outside its declared support"
                )

    @property
    def n(self):
        return self.values.size

    def norm(self):
        return float(np.linalg.norm(self.values))


def as_vector(x):
    """Accept a Signal or a plain vector and return the underlying array."""
    if isinstance(x, Signal):
        return x.values
    return np.asarray(x, dtype=np.float64)


@dataclass(frozen=True)
class MeasurementEnsemble:
    """Gaussian sensing matrix A with its magnitude observations y."""

    A: np.ndarray
    y: np.ndarray
    noise_sigma: float = 0.0

    def __post_init__(self):
        if self.A.ndim != 2 or self.y.ndim != 1 or self.A.shape[0] != self.y.size:
            raise ContractViolationError("ensemble dimensions are inconsistent")
        if self.noise_sigma < 0:
            raise ContractViolationError("noise_sigma must be nonnegative")
        if self.noise_sigma == 0.0 and np.any(self.y < 0):
            raise ContractViolationError("noiseless measurements must be nonnegative")

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]


def _normalized(values):
    norm = np.linalg.norm(values)
    if norm == 0.0:
        raise ContractViolationError("degenerate zero draw cannot be normalized")
    return values / norm


def gen_sparse_signal(n, s, rng_seed):
    """Unit-norm signal with s standard-normal values at random positions."""
    if not 1 <= s <= n:
        raise ContractViolationError(f"sparsity s={s} must satisfy 1 <= s <= n={n}")
    rng = np.random.default_rng(rng_seed)
    support = np.sort(rng.choice(n, size=s, replace=False))
    values = np.zeros(n)
    values[support] = rng.standard_normal(s)
    return Signal(_normalized(values), support)


def gen_block_sparse_signal(n, struct, k, rng_seed):
    """Unit-norm signal supported on k random whole blocks."""
    if struct.n != n:
        raise ContractViolationError("block structure length does not match n")
    if not 1 <= k <= struct.block_count:
        raise ContractViolationError(
            f"block sparsity k={k} exceeds block count {struct.block_count}"
        )
    rng = np.random.default_rng(rng_seed)
    blocks = np.sort(rng.choice(struct.block_count, size=k, replace=False))
    support = struct.coords_of_blocks(blocks)
    values = np.zeros(n)
    values[support] = rng.standard_normal(k * struct.b)
    return Signal(_normalized(values), support)


def gen_powerlaw_signal(n, s, alpha, rng_seed):
    """Unit-norm signal whose j-th largest squared coefficient is C/j^alpha.

    The normalizer C makes the squared magnitudes sum to one exactly; the
    support positions are uniform without replacement and each coefficient
    carries an independent random sign.
    """
    if alpha <= 1:
        raise ContractViolationError("power-law decay requires alpha > 1")
    if not 1 <= s <= n:
        raise ContractViolationError(f"sparsity s={s} must satisfy 1 <= s <= n={n}")
    rng = np.random.default_rng(rng_seed)
    positions = rng.choice(n, size=s, replace=False)
    ranks = np.arange(1, s + 1, dtype=np.float64)
    squared = ranks**-alpha
    squared /= squared.sum()
    signs = 2.0 * rng.integers(0, 2, size=s) - 1.0
    values = np.zeros(n)
    values[positions] = signs * np.sqrt(squared)
    return Signal(values, np.sort(positions))


def gen_measurement_matrix(m, n, rng_seed):
    """m-by-n matrix of i.i.d. standard normal entries."""
    if m < 1 or n < 1:
        raise ContractViolationError("matrix dimensions must be positive")
    rng = np.random.default_rng(rng_seed)
    return rng.standard_normal((m, n))


def measure(A, x):
    """Magnitude observations y = |A x|."""
    values = as_vector(x)
    if A.shape[1] != values.size:
        raise ContractViolationError(
            f"matrix columns {A.shape[1]} do not match signal length {values.size}"
        )
    return np.abs(A @ values)


def measure_noisy(A, x, sigma, rng_seed, distribution="gaussian"):
    """Noisy magnitudes y = |A x| + eps with eps i.i.d. N(0, sigma^2).

    The distribution tag exists so heavier sub-exponential noise can be
    added later; only "gaussian" is implemented.  sigma = 0 reduces to
    measure exactly.  Entries may be negative once noise is added.
    """
    if sigma < 0:
        raise ContractViolationError("sigma must be nonnegative")
    if distribution != "gaussian":
        raise ContractViolationError(f"unknown noise distribution {distribution!r}")
    clean = measure(A, x)
    if sigma == 0:
        return clean
    rng = np.random.default_rng(rng_seed)
    return clean + sigma * rng.standard_normal(clean.size)
