"""Exception hierarchy.

ValidationError derives from ValueError so callers can catch bad-input
problems idiomatically; the CLI maps ValidationError to exit code 3 and
NumericError to exit code 4.
"""


class RexsimError(Exception):
    """Base class for all package errors."""


class ValidationError(RexsimError, ValueError):
    """Invalid input value or violated domain invariant."""


class InconsistencyError(ValidationError):
    """Mutually inconsistent measured inputs (beyond tolerance bands)."""


class ConfigError(ValidationError):
    """Configuration file problem; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericError(RexsimError):
    """Numerical routine failed (non-convergence, degenerate fit input)."""


class FitError(NumericError):
    """Curve fit or regression could not produce a usable estimate."""
