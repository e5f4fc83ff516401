"""Exception hierarchy.

Every failure mode the numeric layers can signal is a subclass of
GatekeepError, so callers (sweeps, the CLI) can catch one base class and
record per-point failures without masking programming errors.
"""


class GatekeepError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GatekeepError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NearSingularCorrelationError(DomainError):
    """|rho| so close to 1 that the bivariate normal CDF is unreliable.

    Callers must use the univariate reduction instead.
    """


class TiltOverflowError(GatekeepError, OverflowError):
    """A tilted moment exceeds the double-precision exponent range."""


class BracketFailureError(GatekeepError):
    """No sign change found inside the admissible bracketing window."""


class InconsistentEquilibriumError(GatekeepError):
    """Solved quantities violate an identity they should satisfy.

    Signals solver drift or a programming error, not bad user input.
    """


class KinkError(GatekeepError):
    """Finite-difference derivative requested at a non-differentiable point."""


class IterationCapError(GatekeepError):
    """An iterative search hit its hard cap (indicates a bug, not math)."""


class ToleranceNotMetError(GatekeepError):
    """Adaptive quadrature could not reach the requested tolerance."""


class ParseError(GatekeepError):
    """Config text is syntactically malformed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class ValidationError(GatekeepError, ValueError):
    """Config parsed but violates a documented invariant."""
