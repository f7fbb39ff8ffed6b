"""Exception hierarchy shared by all modules."""


class KrelError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(KrelError, ValueError):
    """Raised when a matrix contains NaN or Inf, or an argument is malformed."""


class DimensionError(KrelError, ValueError):
    """Raised when operands live in spaces of different dimension."""


class InvalidRelationBasis(KrelError, ValueError):
    """Raised when the stacked columns [F; G] are linearly dependent."""


class NotAngular(KrelError):
    """Raised when a subspace meets H^- nontrivially and has no angular operator."""


class NotStrictContraction(KrelError, ValueError):
    """Raised when an angular operator has norm >= 1."""


class PreconditionFailed(KrelError):
    """Raised when a checker is called on an instance outside its hypotheses.

    The offending predicate is stored in ``predicate``.
    """

    def __init__(self, predicate, message=None):
        self.predicate = predicate
        super().__init__(message or f"precondition failed: {predicate}")


class InternalInvariantViolation(KrelError):
    """Raised when a postcondition that the mathematics guarantees does not hold numerically."""


class DegenerateSubspaceMetric(KrelError):
    """Raised when the indefinite metric restricted to a subspace is degenerate."""


class ShiftSingular(KrelError):
    """Raised when a shifted block T - lambda I that must be inverted is singular."""


class GenerationFailed(KrelError):
    """Raised when random instance generation keeps failing validation."""


class UsageError(KrelError, ValueError):
    """Raised on invalid command-line or rendering arguments."""
