"""Exception hierarchy shared by every module of the package."""


class GradedVNAError(Exception):
    """Base class for all errors raised by :mod:`gradedvna`."""


class InputError(GradedVNAError, ValueError):
    """Arguments violate an operation's documented precondition."""


class PreconditionError(InputError):
    """A structural hypothesis (central, balanced, factor, ...) does not hold."""


class DocumentError(InputError):
    """An algebra document is malformed or fails validation."""


class NumericalInconsistencyError(GradedVNAError, ArithmeticError):
    """A quantity that must be an integer (rank, block size) is not."""


class DegenerateSpectrumError(NumericalInconsistencyError):
    """Random central elements kept producing clustered eigenvalues."""


class InternalLimitError(GradedVNAError, RuntimeError):
    """An iterative procedure exceeded its hard cap."""


class InvariantViolationError(GradedVNAError, AssertionError):
    """A computed object contradicts a structural theorem."""
