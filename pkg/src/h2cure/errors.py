"""Exception hierarchy shared by the library and the command line.

Each class carries the process exit code the CLI uses when it escapes.
"""


class PlannerError(Exception):
    exit_code = 2


class UsageError(PlannerError, ValueError):
    """Malformed invocation: unknown unit, missing suffix, bad flag."""

    exit_code = 1


class DomainError(PlannerError, ValueError):
    """Input outside the mathematical domain of an operation."""

    exit_code = 2


class DataError(DomainError):
    """Invalid content in an input file."""


class RangeError(DomainError):
    """Request outside tabulated data (no extrapolation)."""


class ConfigurationError(DomainError):
    """Missing or inconsistent model configuration."""


class ConvergenceError(PlannerError, ArithmeticError):
    exit_code = 3


class NumericError(ConvergenceError):
    """Linear algebra failure inside a solver."""


class InfeasibleError(PlannerError):
    """Requested concentration exceeds what the gas conditions can supply.

    ``max_concentration`` holds the saturation value (1/m^3) of the best
    conditions examined, when known.
    """

    exit_code = 4

    def __init__(self, message, max_concentration=None):
        super().__init__(message)
        self.max_concentration = max_concentration
