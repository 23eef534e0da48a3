"""Exception types shared across the package."""


class CauchyQuadError(Exception):
    """Base class for all errors raised by cauchyquad."""


class ConvergenceError(CauchyQuadError):
    """An iterative method hit its iteration cap.

    ``partial`` carries whatever the method had computed when it gave up
    (best estimate, converged eigenvalues, ...).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SingularMatrixError(CauchyQuadError):
    pass


class ApproximationError(CauchyQuadError):
    """Rational approximation or rule construction failed."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class GeometryError(CauchyQuadError):
    pass


class ProximityError(CauchyQuadError):
    """Evaluation point lies (numerically) on the integration arc."""


class RuleFormatError(CauchyQuadError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class RankDeficiencyWarning(UserWarning):
    pass
