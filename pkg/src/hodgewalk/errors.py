"""Exception types shared across the package."""


class HodgewalkError(Exception):
    """Base class for all package errors."""


class DegenerateSimplex(HodgewalkError):
    """A simplex with a repeated vertex (self-loop edge, degenerate triangle)."""


class DimensionError(HodgewalkError):
    """A vector or matrix does not match the complex's dimensions."""


class ConvergenceError(HodgewalkError):
    """An iterative solver stopped before reaching its tolerance.

    Carries the achieved residual(s) so callers can decide whether the
    partial answer is usable.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class ParameterError(HodgewalkError):
    """A parameter outside its documented range (e.g. beta <= 2)."""


class InvalidTrajectory(HodgewalkError):
    """A trajectory step between vertices that do not form an edge."""

    def __init__(self, message, step=None, pair=None):
        super().__init__(message)
        self.step = step
        self.pair = pair


class ParseError(HodgewalkError):
    """A malformed input file; ``line`` is the 1-based offending line."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class UnsupportedQuery(HodgewalkError):
    """An operation requested outside its supported domain."""
