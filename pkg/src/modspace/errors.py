"""Exception hierarchy for modspace."""


class ModspaceError(Exception):
    """Base class for all errors raised by modspace."""


class ParameterError(ModspaceError, ValueError):
    """Invalid numeric parameter (grid size, exponent, radius, ...)."""


class EvaluationError(ModspaceError):
    """A function or symbol produced a non-finite value."""


class DomainCoverageError(ModspaceError):
    """The sampling grid does not cover the support of a shifted window."""


class CoverageError(ModspaceError):
    """A point lies in no piece of a piecewise-affine map."""


class DomainError(ModspaceError):
    """A nonlinear map is not injective on the region that matters."""


class PreconditionError(ModspaceError):
    """An operation was called on input outside its contract."""


class DegenerateInputError(ModspaceError):
    """A ratio was requested with a vanishing denominator."""
