"""Exception hierarchy shared across the package."""


class QLBitError(Exception):
    """Base class for all errors raised by :mod:`qlbit`."""


class BasisStateError(QLBitError, ValueError):
    """An amplitude is zero, so the amplitude ratio is undefined."""


class ClassInvariantViolation(QLBitError, ValueError):
    pass


class ObstructionViolated(QLBitError, ValueError):
    """The requested ratio lies off the realizable locus of a coupling class."""

    def __init__(self, message, locus=None):
        super().__init__(message)
        self.locus = locus


class DegenerateRatio(QLBitError, ValueError):
    """``r = ±i`` collapses the gap formula of a symmetric model."""


class NonzeroGapImpossible(DegenerateRatio):
    pass


class ParityViolation(QLBitError, ValueError):
    pass


class DegreeOutOfRange(QLBitError, ValueError):
    pass


class NotRegular(QLBitError, ValueError):
    pass


class NotSymmetric(NotRegular):
    pass


class SelfLoop(NotRegular):
    pass


class LatticeViolation(QLBitError, ValueError):
    pass


class NotAlgebraicallyRegular(QLBitError, ValueError):
    def __init__(self, message, axis=None, index=None):
        super().__init__(message)
        self.axis = axis
        self.index = index


class DimensionMismatch(QLBitError, ValueError):
    pass


class SizeCapExceeded(QLBitError, ValueError):
    pass


class SolverFailure(QLBitError, RuntimeError):
    pass


class InitialStateNotSynchronized(QLBitError, ValueError):
    pass


class ExactCheckFailed(QLBitError, AssertionError):
    """An exact identity did not hold; this indicates a bug, never bad input."""


class IllConditionedDiagonalization(RuntimeWarning):
    """Emitted when evolution falls back from eigendecomposition to ``expm``."""
