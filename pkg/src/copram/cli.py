"""Command line front end for single recoveries and experiment sweeps.

Subcommands: recover, phase-transition, block-sweep, noise-sweep,
powerlaw-sweep.  Values come from CLI flags first, then an optional
key=value config file, then a preset, then built-in defaults.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
failure.
"""

import argparse
import sys
import time

from .cosamp import CosampConfig
from .exceptions import (
    ConfigurationError,
    ContractViolationError,
    ConvergenceError,
    CsvIoError,
)
from .harness import (
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
    write_csv_rows,
)
from .model import (
    BlockStructure,
    gen_block_sparse_signal,
    gen_measurement_matrix,
    gen_powerlaw_signal,
    gen_sparse_signal,
    measure_noisy,
)
from .metrics import recovery_verdict
from .seeding import derive_seed
from .solver import SolverConfig, block_copram, copram

_INT_LIST_KEYS = {"s", "m", "b"}
_FLOAT_LIST_KEYS = {"alpha", "nsr"}
_INT_KEYS = {"n", "k", "trials", "seed", "t0", "inner_iters", "workers"}
_FLOAT_KEYS = {"success_threshold"}
_STR_KEYS = {"algo", "preset", "out"}
_KNOWN_KEYS = _INT_LIST_KEYS | _FLOAT_LIST_KEYS | _INT_KEYS | _FLOAT_KEYS | _STR_KEYS


def _parse_int_list(text):
    return [int(v) for v in _expand_list(text)]


def _parse_float_list(text):
    return [float(v) for v in _expand_list(text)]


def _expand_list(text):
    """Expand "a", "a,b,c", or "start:stop:step" (stop inclusive)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range {text!r} must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError(f"range step in {text!r} must be positive")
        count = int(round((stop - start) / step)) + 1
        values = [start + i * step for i in range(max(count, 0))]
        return [f"{v:.12g}" for v in values if v <= stop + 1e-9 * abs(step)]
    return [v for v in (p.strip() for p in text.split(",")) if v]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="copram",
        description="Sparse phase retrieval experiments (CoPRAM and Block CoPRAM).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (
        "recover", "phase-transition", "block-sweep", "noise-sweep",
        "powerlaw-sweep",
    ):
        p = sub.add_parser(name)
        p.add_argument("--n", type=int)
        p.add_argument("--s", type=_parse_int_list,
                       help="sparsity; single value or comma list")
        p.add_argument("--b", type=_parse_int_list,
                       help="block length; list allowed for block-sweep")
        p.add_argument("--k", type=int, help="block sparsity")
        p.add_argument("--m", type=_parse_int_list,
                       help="measurements; value, comma list, or start:stop:step")
        p.add_argument("--alpha", type=_parse_float_list,
                       help="power law decay rates (> 1)")
        p.add_argument("--nsr", type=_parse_float_list,
                       help="noise-to-signal ratios sigma^2/||x||^2")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--algo", choices=("copram", "block-copram"))
        p.add_argument("--t0", type=int, help="outer alternating iterations")
        p.add_argument("--inner-iters", type=int, dest="inner_iters")
        p.add_argument("--success-threshold", type=float,
                       dest="success_threshold")
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--workers", type=int)
        p.add_argument("--preset", choices=tuple(PRESETS))
        p.add_argument("--config", help="flat key=value config file")
    return parser


def _load_config(path):
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigurationError(
                    "config", f"{path}:{lineno}: expected key=value, got {line!r}"
                )
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _KNOWN_KEYS:
                raise ConfigurationError(
                    "config", f"{path}:{lineno}: unknown configuration key {key!r}"
                )
            values[key] = value.strip()
    return values


def _coerce(key, text):
    try:
        if key in _INT_LIST_KEYS:
            return _parse_int_list(text)
        if key in _FLOAT_LIST_KEYS:
            return _parse_float_list(text)
        if key in _INT_KEYS:
            return int(text)
        if key in _FLOAT_KEYS:
            return float(text)
        if key in _STR_KEYS:
            return text
    except ValueError as exc:
        raise ConfigurationError(key, str(exc)) from exc
    raise ConfigurationError("config", f"unknown configuration key {key!r}")


class _Settings:
    """CLI > config file > preset > built-in default resolution."""

    def __init__(self, ns, config, preset):
        self.ns = ns
        self.config = config
        self.preset = preset

    def get(self, key, default=None, preset_key=None):
        cli = getattr(self.ns, key, None)
        if cli is not None:
            return cli
        if key in self.config:
            return _coerce(key, self.config[key])
        if preset_key and self.preset and preset_key in self.preset:
            return self.preset[preset_key]
        return default


def _single(values, field):
    if values is None:
        return None
    if len(values) != 1:
        raise ConfigurationError(field, "expects a single value here")
    return values[0]


def _solver_config(settings, track_trace=False):
    return SolverConfig(
        outer_iters=settings.get("t0", 30),
        cosamp=CosampConfig(max_inner_iters=settings.get("inner_iters", 5)),
        track_trace=track_trace,
    )


def _algorithm(settings):
    return settings.get("algo", "copram").replace("-", "_")


def _emit(rows, out):
    if out:
        emit_csv(rows, out)
    else:
        write_csv_rows(sys.stdout, rows)


def _cmd_recover(settings):
    n = settings.get("n", 3000, preset_key="n")
    s = _single(settings.get("s", [20]), "s")
    m = _single(settings.get("m", [1000]), "m")
    b = _single(settings.get("b"), "b")
    k = settings.get("k")
    alpha = _single(settings.get("alpha"), "alpha")
    nsr = _single(settings.get("nsr", [0.0]), "nsr")
    seed = settings.get("seed", DEFAULT_MASTER_SEED)
    algorithm = _algorithm(settings)
    threshold = settings.get("success_threshold", 0.05)
    if b is not None and k is None:
        k = s // b
    grid = ExperimentGrid(
        kind="single_recover", algorithm=algorithm, n=n, s_values=(s,),
        m_values=(m,), b=b, k=k, trials=1, master_seed=seed,
        success_threshold=threshold,
        solver=_solver_config(settings, track_trace=True),
    )

    trial_seed = derive_seed(seed, grid.kind, algorithm, n, s,
                             b if b is not None else -1,
                             k if k is not None else -1, m, alpha, nsr, 0)
    if alpha is not None:
        x_true = gen_powerlaw_signal(n, s, alpha, derive_seed(trial_seed, "signal"))
    elif b is not None:
        x_true = gen_block_sparse_signal(
            n, BlockStructure(n, b), k, derive_seed(trial_seed, "signal")
        )
    else:
        x_true = gen_sparse_signal(n, s, derive_seed(trial_seed, "signal"))
    A = gen_measurement_matrix(m, n, derive_seed(trial_seed, "matrix"))
    sigma = (nsr ** 0.5) * x_true.norm() if nsr else 0.0
    y = measure_noisy(A, x_true, sigma, derive_seed(trial_seed, "noise"))

    start = time.perf_counter()
    if algorithm == "block_copram":
        report = block_copram(A, y, BlockStructure(n, b), k, grid.solver,
                              x_true=x_true)
    else:
        report = copram(A, y, s, grid.solver, x_true=x_true)
    elapsed = time.perf_counter() - start

    for i, (d, r) in enumerate(zip(report.dist_trace, report.residual_trace)):
        print(f"iter={i} dist={d:.6g} residual={r:.6g}")
    verdict = recovery_verdict(report.x_final, x_true, threshold)
    print(f"relative_error={verdict.relative_error:.6g}")
    print(f"iterations={report.iterations_run}")
    print(f"wall_time_seconds={elapsed:.6g}")
    print(f"success={'true' if verdict.success else 'false'}")

    out = settings.get("out")
    if out:
        row = ResultRow(
            experiment="single_recover", algorithm=algorithm, n=n, s=s, b=b,
            k=k, m=m, alpha=alpha, nsr=nsr or None, trials=1,
            recovery_probability=1.0 if verdict.success else 0.0,
            mean_relative_error=verdict.relative_error,
            mean_wall_time_seconds=elapsed, master_seed=seed,
        )
        emit_csv([row], out)
    return 0


def _common_grid_kwargs(settings, kind):
    return dict(
        kind=kind,
        algorithm=_algorithm(settings),
        n=settings.get("n", 3000, preset_key="n"),
        trials=settings.get("trials", 50, preset_key="trials"),
        master_seed=settings.get("seed", DEFAULT_MASTER_SEED),
        success_threshold=settings.get("success_threshold", 0.05),
        solver=_solver_config(settings),
    )


def _cmd_phase_transition(settings):
    kwargs = _common_grid_kwargs(settings, "phase_transition")
    grid = ExperimentGrid(
        s_values=tuple(settings.get("s", [20])),
        m_values=tuple(settings.get("m", list(PRESETS["paper"]["m_values"]),
                                    preset_key="m_values")),
        b=_single(settings.get("b"), "b"),
        **kwargs,
    )
    rows = run_phase_transition(grid, workers=settings.get("workers", 1))
    _emit(rows, settings.get("out"))
    return 0


def _cmd_block_sweep(settings):
    kwargs = _common_grid_kwargs(settings, "block_sweep")
    grid = ExperimentGrid(
        s_values=tuple(settings.get("s", [20])),
        m_values=tuple(settings.get("m", [250])),
        b_values=tuple(settings.get("b", [1, 2, 5, 10, 20])),
        **kwargs,
    )
    rows = run_block_sweep(grid, workers=settings.get("workers", 1))
    _emit(rows, settings.get("out"))
    return 0


def _cmd_noise_sweep(settings):
    kwargs = _common_grid_kwargs(settings, "noise_sweep")
    default_nsr = [round(0.1 * i, 10) for i in range(1, 11)]
    grid = ExperimentGrid(
        s_values=tuple(settings.get("s", [20])),
        m_values=tuple(settings.get("m", [1600])),
        b=_single(settings.get("b", [5]), "b"),
        nsr_values=tuple(settings.get("nsr", default_nsr)),
        **kwargs,
    )
    rows = run_noise_sweep(grid, workers=settings.get("workers", 1))
    _emit(rows, settings.get("out"))
    return 0


def _cmd_powerlaw_sweep(settings):
    kwargs = _common_grid_kwargs(settings, "powerlaw_sweep")
    grid = ExperimentGrid(
        s_values=tuple(settings.get("s", [20])),
        m_values=tuple(settings.get("m", list(PRESETS["paper"]["m_values"]),
                                    preset_key="m_values")),
        alpha_values=tuple(settings.get("alpha", [2.0, 4.0, 8.0])),
        **kwargs,
    )
    rows = run_powerlaw_sweep(grid, workers=settings.get("workers", 1))
    _emit(rows, settings.get("out"))
    return 0


_COMMANDS = {
    "recover": _cmd_recover,
    "phase-transition": _cmd_phase_transition,
    "block-sweep": _cmd_block_sweep,
    "noise-sweep": _cmd_noise_sweep,
    "powerlaw-sweep": _cmd_powerlaw_sweep,
}


def main(argv=None):
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        config = _load_config(ns.config) if ns.config else {}
        preset = PRESETS[ns.preset] if ns.preset else None
        settings = _Settings(ns, config, preset)
        return _COMMANDS[ns.command](settings)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ContractViolationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except CsvIoError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
