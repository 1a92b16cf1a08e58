"""Sparse phase retrieval via alternating minimization.

Recovers a sparse (or block sparse) real signal from the magnitudes of
Gaussian linear measurements.  The two solvers, copram and block_copram,
pair a spectral initializer restricted to an estimated support with an
alternating phase/signal descent whose inner step is a model-based
CoSaMP solve.  A seeded Monte Carlo harness and a CLI reproduce phase
transition, block length, noise, and power law experiments.
"""

from .cosamp import CosampConfig, block_cosamp, cosamp
from .exceptions import (
    ConfigurationError,
    ContractViolationError,
    ConvergenceError,
    CopramError,
    CsvIoError,
)
from .harness import (
    CSV_HEADER,
    DEFAULT_MASTER_SEED,
    PRESETS,
    ExperimentGrid,
    ResultRow,
    emit_csv,
    run_block_sweep,
    run_cell,
    run_noise_sweep,
    run_phase_transition,
    run_powerlaw_sweep,
)
from .initialization import (
    InitEstimate,
    block_copram_init,
    block_marginals,
    copram_init,
    marginals,
    signal_power_estimate,
    spectral_estimate,
    top_k_block_support,
    top_s_support,
)
from .kernels import BACKEND, HAS_NUMBA
from .linalg import least_squares, matvec, top_singular_vector
from .metrics import (
    DEFAULT_SUCCESS_THRESHOLD,
    RecoveryVerdict,
    dist_op,
    recovery_verdict,
    sign_of,
)
from .model import (
    BlockStructure,
    MeasurementEnsemble,
    Signal,
    gen_block_sparse_signal,
    gen_measurement_matrix,
    gen_powerlaw_signal,
    gen_sparse_signal,
    measure,
    measure_noisy,
)
from .seeding import derive_seed, mix64
from .solver import (
    SolverConfig,
    SolverReport,
    block_copram,
    clustered_sparsity_frontend,
    copram,
    phase_estimate,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlockStructure",
    "CSV_HEADER",
    "ConfigurationError",
    "ContractViolationError",
    "ConvergenceError",
    "CopramError",
    "CosampConfig",
    "CsvIoError",
    "DEFAULT_MASTER_SEED",
    "DEFAULT_SUCCESS_THRESHOLD",
    "ExperimentGrid",
    "HAS_NUMBA",
    "InitEstimate",
    "MeasurementEnsemble",
    "PRESETS",
    "RecoveryVerdict",
    "ResultRow",
    "Signal",
    "SolverConfig",
    "SolverReport",
    "block_copram",
    "block_copram_init",
    "block_cosamp",
    "block_marginals",
    "clustered_sparsity_frontend",
    "copram",
    "copram_init",
    "cosamp",
    "derive_seed",
    "dist_op",
    "emit_csv",
    "gen_block_sparse_signal",
    "gen_measurement_matrix",
    "gen_powerlaw_signal",
    "gen_sparse_signal",
    "least_squares",
    "marginals",
    "matvec",
    "measure",
    "measure_noisy",
    "mix64",
    "phase_estimate",
    "recovery_verdict",
    "run_block_sweep",
    "run_cell",
    "run_noise_sweep",
    "run_phase_transition",
    "run_powerlaw_sweep",
    "sign_of",
    "signal_power_estimate",
    "spectral_estimate",
    "top_k_block_support",
    "top_s_support",
    "top_singular_vector",
]
