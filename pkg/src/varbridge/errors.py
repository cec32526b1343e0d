"""Exception hierarchy.

Two broad classes matter to callers (and to the CLI exit-code mapping):
``ValidationError`` for rejected inputs, ``NumericalError`` for computations
that started from valid inputs but could not be completed.
"""


class VarbridgeError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(VarbridgeError, ValueError):
    """Inputs violate a documented contract (domain, shape, finiteness)."""


class OutOfRangeError(ValidationError):
    """A numeric argument lies outside its admissible interval."""

    def __init__(self, name: str, message: str):
        self.name = name
        super().__init__(message)


class NonFiniteError(ValidationError):
    """NaN or infinity where a finite number is required."""


class RegimeError(ValidationError):
    """Operation requires the bounded (stationary) regime, beta < 0."""


class WeightSumError(ValidationError):
    """Quadratic-form weights do not sum to zero within tolerance."""


class DimensionMismatchError(ValidationError):
    """Arrays disagree in length or coordinate dimension."""


class SizeCapError(ValidationError):
    """Requested problem size exceeds the configured cap."""


class TooFewBinsError(ValidationError):
    """Empirical variogram has fewer nonempty bins than free parameters."""


class IndexOutOfRangeError(ValidationError, IndexError):
    """Point index outside the realization."""


class DegenerateGeometryError(ValidationError):
    """Point configuration carries no usable pairwise distances."""


class EmptySeriesError(ValidationError):
    """A plot series contains no points."""


class NumericalError(VarbridgeError, ArithmeticError):
    """A numerically valid computation failed to produce a result."""


class NotPSDError(NumericalError):
    """Matrix not positive semidefinite even at the maximum jitter."""


class EmbeddingFailedError(NumericalError):
    """Circulant embedding stayed indefinite at the maximum padding."""


class NoProgressError(NumericalError):
    """Every optimizer start failed to improve on its initial objective."""
