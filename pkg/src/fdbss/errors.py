"""Exception types shared across the package."""


class FdbssError(Exception):
    """Base class for all package errors."""


class InvalidInputError(FdbssError):
    """Input violates a documented precondition (shape, range, finiteness)."""


class DegenerateComponentError(FdbssError):
    """A component has zero variance or a singular covariance."""


class GridTooCoarseError(FdbssError):
    """Evaluation grid does not resolve the kernel bandwidth."""


class SingularSystemError(FdbssError):
    """Unregularized linear system is numerically singular (try lambda > 0)."""


class UnsupportedError(FdbssError):
    """Requested configuration is outside the implemented scope (e.g. n != 2)."""


class LandscapeError(FdbssError):
    """Estimator failure during a landscape sweep; carries the offending angle."""

    def __init__(self, theta, cause):
        super().__init__(f"estimator failed at theta={theta!r}: {cause}")
        self.theta = theta
        self.cause = cause
