"""Exception hierarchy shared by all confcap modules."""


class ConfcapError(Exception):
    """Base class for every error raised by confcap."""


class DomainError(ConfcapError, ValueError):
    """An argument lies outside the domain of a function."""


class PoleError(DomainError):
    """Evaluation at (or numerically at) a pole."""


class ConvergenceError(ConfcapError, RuntimeError):
    """An iterative method failed to converge."""


class NoRootError(ConvergenceError):
    """A root finder could not locate a zero."""


class ConstraintError(ConfcapError, ValueError):
    """Geometric data violate the constraints of a construction."""


class ResolutionError(ConfcapError, ValueError):
    """A grid is too coarse to resolve the requested geometry."""


class ConstraintWarning(UserWarning):
    """Data fall outside the range where a formula is known to apply."""
