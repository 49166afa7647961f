"""Exception hierarchy shared by all modules."""


class ApproximationError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(ApproximationError, ValueError):
    """Input shapes or lengths are inconsistent."""


class DomainError(ApproximationError, ValueError):
    """An argument lies outside the domain of the operation."""


class ParameterError(ApproximationError, ValueError):
    """A numeric parameter is out of range."""


class EvaluationError(ApproximationError, ArithmeticError):
    """A function returned a non-finite value at ``node``."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class DegeneracyError(ApproximationError, ValueError):
    """Repeated interpolation nodes."""


class NotAdmissibleError(ApproximationError):
    """The activation has a vanishing Wirtinger derivative at its base point."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class StencilTooWideError(ApproximationError, ValueError):
    """Stencil nodes would leave the smoothness ball of the activation."""


class ConditioningError(ApproximationError):
    """The requested accuracy could not be reached in floating point.

    ``best_residual`` and ``network`` carry the best attempt.
    """

    def __init__(self, message, best_residual=None, network=None, h=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.network = network
        self.h = h


class BudgetError(ApproximationError, ValueError):
    """A quadrature or evaluation budget would be exceeded."""


class SingularityError(DomainError):
    """Evaluation at a point where the closed form is singular."""


class SpanFailureError(ApproximationError):
    """Random ridge directions failed to span the requested space."""


class BasisInsufficientError(ApproximationError):
    """A ridge basis does not span the polynomial space being projected."""
