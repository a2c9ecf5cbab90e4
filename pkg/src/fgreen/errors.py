"""Exception hierarchy shared by all evaluators."""


class FGError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FGError, ValueError):
    """Argument outside the region where a formula is valid."""


class OrderError(FGError, ValueError):
    """Asymptotic truncation order outside the allowed range."""


class ConstraintError(FGError, ValueError):
    """A constructed object violates a defining constraint."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CausticError(DomainError):
    """Evaluation requested on (or too close to) a caustic set."""


class SingularityError(DomainError):
    """Kernel evaluated at a non-integrable singularity."""


class BranchError(DomainError):
    """No square-root branch satisfies the required sector condition."""


class QuadratureError(FGError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class UnsupportedOrderError(FGError, NotImplementedError):
    """Requested expansion coefficient is distributional and not evaluated."""
