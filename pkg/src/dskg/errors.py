"""Exception types shared across the package."""


class DskgError(Exception):
    """Base class for all package errors."""


class DomainError(DskgError, ValueError):
    """Arguments lie outside the region where an operation is defined."""


class InvalidParams(DskgError, ValueError):
    """Hypergeometric parameters are not admissible (c a non-positive integer)."""


class NonConvergence(DskgError, ArithmeticError):
    """A series did not reach its tolerance within the term cap."""


class RealnessError(DskgError, ArithmeticError):
    """A value expected to be real carries a non-negligible imaginary part."""


class DepthExceeded(DskgError, ArithmeticError):
    """Adaptive quadrature hit its bisection limit with the tolerance unmet."""


class StepFailure(DskgError, ArithmeticError):
    """The ODE integrator could not continue (step size underflow)."""


class CFLViolation(DskgError, ValueError):
    """Time step exceeds the stability bound of the explicit scheme."""


class BoundaryUnsupported(DskgError, ValueError):
    """Requested boundary treatment is not implemented by the grid solver."""
