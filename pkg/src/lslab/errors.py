"""Exception types shared across the toolkit."""


class LslabError(Exception):
    """Base class for every error raised by this package."""


class NotFiniteError(LslabError):
    """Input contains NaN or Inf entries."""


class NotSymmetricError(LslabError):
    """Matrix is not symmetric within tolerance."""


class NotPositiveDefiniteError(LslabError):
    """Matrix is not positive definite."""


class NotPsdError(LslabError):
    """Matrix is not positive semidefinite within tolerance."""


class NotOrthogonalError(LslabError):
    """Matrix is not orthogonal within tolerance."""


class SizeNotPowerOfTwoError(LslabError):
    """Size must be a power of two."""


class NonPositiveTauError(LslabError):
    """Threshold parameter must be strictly positive."""


class DimensionMismatchError(LslabError):
    """Operand shapes do not conform."""


class EmptyMaskError(LslabError):
    """Observation mask selects no entries."""


class InvalidKError(LslabError):
    """Clique size k outside the valid range."""


class InvalidShapeError(LslabError):
    """Generator shape parameters are invalid."""


class InvalidRateError(LslabError):
    """Sampling rate outside (0, 1]."""


class UnknownFamilyError(LslabError):
    """Unrecognized experiment family id."""


class InfeasibleRadiusError(LslabError):
    """Feasibility radius smaller than the distance from y to the range of A."""


class UsageError(LslabError):
    """Bad command line or config input; message names the offending key."""


class IoError(LslabError):
    """File could not be read or parsed."""
