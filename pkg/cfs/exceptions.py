class CFSError(Exception):
    """Base exception for complete flux scheme operations."""
    pass


class ProblemDefinitionError(CFSError):
    """Raised when a problem's coefficients or boundary data are invalid."""
    pass


class ExpressionError(ProblemDefinitionError):
    """Raised when a coefficient expression cannot be parsed."""
    pass


class GridError(CFSError):
    """Raised when a grid cannot be built from the requested size or step."""
    pass


class DomainError(CFSError, ValueError):
    """Raised when a function argument lies outside its domain."""
    pass


class AssemblyError(CFSError):
    """Raised when the assembled system is unusable (e.g. non-positive diagonal)."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class SingularSystemError(CFSError):
    """Raised when the tridiagonal solver meets a (near) zero pivot."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class ConvergenceError(CFSError):
    """Raised when the fixed-point iteration for a nonlinear source stalls."""

    def __init__(self, message: str, trace: list[float] | None = None):
        super().__init__(message)
        self.trace = list(trace or [])


class QuadratureError(CFSError):
    """Raised when an oracle quadrature misses its tolerance."""

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved
