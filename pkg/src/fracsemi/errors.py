"""Exception types shared across the library."""


class FracsemiError(Exception):
    """Base class for library errors."""


class ParameterError(FracsemiError, ValueError):
    """A parameter violates a documented precondition."""


class ConvergenceError(FracsemiError, ArithmeticError):
    """A quadrature or iteration failed its self-consistency check."""


class GridError(FracsemiError, ValueError):
    """A spatial grid is unusable for the requested computation."""
