"""Exception types raised by mixedquerm."""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DimensionMismatchError(GeometryError):
    """Operands live in different ambient dimensions."""


class DegenerateBodyError(GeometryError):
    """A body (or one of its projections) is lower-dimensional where full dimension is required."""

    def __init__(self, message, sample_index=None):
        super().__init__(message)
        self.sample_index = sample_index


class UnsupportedOperandError(TypeError):
    """Operation is defined for polytopes only (use ``ball_approx`` for balls)."""
