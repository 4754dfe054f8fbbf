class PersFLError(Exception):
    """Base class for every error raised by the simulator."""


class ConfigurationError(PersFLError, ValueError):
    """Invalid synthetic spec, algorithm config or experiment file."""


class DimensionMismatchError(PersFLError, ValueError):
    """Parameter vector and feature matrix do not line up."""


class UndefinedMetricError(PersFLError):
    """A metric was requested where it has no defined value (e.g. zero oracle MSE)."""


class DivergenceError(PersFLError, ArithmeticError):
    """An iterate left the finite range, typically because the step size is too large."""
