"""Exception hierarchy shared by all modules."""


class PDepthError(Exception):
    """Base class for errors raised by this package."""


class RingMismatchError(PDepthError, TypeError):
    """Operands live in different coefficient rings."""


class ParameterDomainError(PDepthError, ValueError):
    """Parameters fall outside the regime an operation is defined for."""


class HigherOrderPoleError(PDepthError, ValueError):
    """A residue was requested at a pole of order two or more."""


class NotReducibleError(PDepthError, ValueError):
    """A rational expression cannot be reduced modulo p (zero denominator)."""


class InternalInconsistencyError(PDepthError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class IncompleteSpecializationError(PDepthError, KeyError):
    """A specialization does not assign some variable that occurs."""


class NotFoundError(PDepthError):
    """A witness search exhausted its budget."""
