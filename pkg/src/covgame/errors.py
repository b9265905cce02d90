"""Exception hierarchy shared by every covgame module."""


class CovgameError(Exception):
    """Base class for all errors raised by covgame."""


class InvalidArgumentError(CovgameError, ValueError):
    """An argument violates a documented precondition."""


class QuadratureError(CovgameError):
    """Refinement did not reach the requested tolerance.

    Attributes
    ----------
    estimates : tuple of float
        The last two estimates (coarse, fine) computed before giving up.
    """

    def __init__(self, message, estimates):
        super().__init__(message)
        self.estimates = tuple(estimates)


class CombinatorialCapError(CovgameError):
    """A tensor-grid request exceeds the configured player cap."""


class InfeasibleError(CovgameError):
    """A target utility vector is not in the convex hull of the samples."""


class DegeneratePlayerError(CovgameError):
    """The player's ideal utility equals its Nash utility, so no discount bound exists."""


class GuaranteeUnavailableError(CovgameError):
    """The observation graph cannot support deviator identification."""
