"""Exception hierarchy.

Everything raised deliberately by ftgraph derives from :class:`FTGraphError`,
which is a ``ValueError`` so callers that only care about bad input can catch
that.
"""


class FTGraphError(ValueError):
    pass


class DimensionError(FTGraphError):
    pass


class DegenerateRankError(FTGraphError):
    """The rank split m of an ST-form coupling is outside 1..n-1."""


class NonFiniteError(FTGraphError):
    pass


class InvalidBoundaryError(FTGraphError):
    """(A, B) fails rank(A|B) = n or Hermiticity of A B^dagger."""


class PreconditionError(FTGraphError):
    pass


class SingularSystemError(FTGraphError):
    """A linear system that should be solvable is numerically singular.

    For the approximating graph this means k^2 sits on a resonance of the
    compact part; retry with a slightly shifted k.
    """

    def __init__(self, message, cond=float("inf")):
        super().__init__(message)
        self.cond = cond


class ClassificationError(FTGraphError):
    pass


class NotFreeLikeError(ClassificationError):
    pass


class NotHermitianError(ClassificationError):
    pass


class NotUnitaryError(ClassificationError):
    pass


class InconsistentPartitionError(ClassificationError):
    """Number of positive reflection amplitudes is not 0, n or n/2."""
