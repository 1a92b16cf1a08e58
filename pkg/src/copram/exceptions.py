"""Error types shared across the library.

The CLI maps these onto process exit codes: configuration problems exit
with 2, I/O problems with 3, and numerical failures with 4.
"""


class CopramError(Exception):
    """Base class for all library errors."""


class ContractViolationError(CopramError, ValueError):
    """An argument violates a documented precondition (shape, range, NaN)."""


class ConvergenceError(CopramError, ArithmeticError):
    """An iterative routine failed to converge within its iteration cap.

    Carries the last residual so callers can report how far off it was.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConfigurationError(CopramError, ValueError):
    """An experiment configuration is invalid; names the offending field."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class CsvIoError(CopramError, OSError):
    """Reading or writing a results file failed; carries the path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
