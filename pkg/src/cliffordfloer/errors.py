"""Exception hierarchy.

Everything raised for a bad domain input derives from :class:`FloerError` so the
command line front end can map it to exit status 1.
"""


class FloerError(Exception):
    """Base class for domain errors."""


class DimensionMismatchError(FloerError, ValueError):
    pass


class CapacityError(FloerError, ValueError):
    """Requested dimension exceeds what the dense representation supports."""


class UnsupportedDimensionError(FloerError, ValueError):
    pass


class ObstructionError(FloerError):
    """The differential does not square to zero, so homology is undefined."""

    def __init__(self, k, parity):
        self.k = k
        self.parity = parity
        super().__init__(
            f"k={k}: disk bubbling contributes (k+1) mod 2 = {parity}, so the "
            "differential does not square to zero; use an odd k"
        )


class NotInPreimageError(FloerError, ValueError):
    pass


class DomainConstraintError(FloerError, ValueError):
    pass


class PrecisionError(FloerError, ArithmeticError):
    """A Novikov computation ran out of coefficient window."""


class NovikovZeroDivisionError(FloerError, ZeroDivisionError):
    pass


class ResolutionError(FloerError, ArithmeticError):
    """Boundary sampling too coarse to track the argument."""


class AccuracyError(FloerError, ArithmeticError):
    """Quadrature did not converge under grid refinement."""
