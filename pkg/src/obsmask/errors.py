"""Exception hierarchy for obsmask."""


class ObsMaskError(Exception):
    """Base class for all obsmask errors."""


class ValidationError(ObsMaskError, ValueError):
    """An input failed a precondition check."""


class NotHermitianError(ValidationError):
    """Matrix is not Hermitian within tolerance."""


class NotUnitTraceError(ValidationError):
    """Matrix trace differs from 1 beyond tolerance."""


class NotNormalizedError(ValidationError):
    """Vector norm differs from 1 beyond tolerance."""


class NotOrthonormalError(ValidationError):
    """Vector family is not orthonormal within tolerance."""


class NotUnitaryError(ValidationError):
    """Matrix is not unitary within tolerance."""


class NotUnitVectorError(ValidationError):
    """Real vector does not have unit length within tolerance."""


class DimensionMismatchError(ValidationError):
    """Operand dimensions are incompatible."""


class InconsistentDimensionsError(ValidationError):
    """Vector families disagree on dimension."""


class InvalidChannelError(ValidationError):
    """Kraus family violates trace preservation."""


class InvalidStateError(ValidationError):
    """Matrix is not a valid density matrix."""


class BadSpectrumError(ValidationError):
    """Probability vector is not nonnegative and normalized."""


class NumericalFailureError(ObsMaskError):
    """An underlying numerical routine did not converge."""


class NotMaskableError(ObsMaskError):
    """Requested a masker for an observable that has none."""


class EmptyDiskError(ObsMaskError):
    """The masking plane misses the Bloch ball; no output states exist."""


class DegenerateStateError(ObsMaskError):
    """State configuration admits no solution (e.g. maximally mixed point)."""


class DegenerateLineError(ObsMaskError):
    """Segment is collinear with the origin; normal direction not unique."""


class DegenerateSpanError(ObsMaskError):
    """Point set does not span the required affine dimension."""


class InconsistentConstraintsError(ObsMaskError):
    """No single coefficient vector satisfies all masking constraints."""


class IdenticalPointsError(ValidationError):
    """The two points coincide within tolerance."""


class NoAffineSolutionError(ObsMaskError):
    """The linear masking constraints are mutually inconsistent."""


class InfeasibleError(ObsMaskError):
    """Feasibility search found no common output state.

    Carries ``residual``, the final distance between the constraint sets.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class ParseError(ObsMaskError, ValueError):
    """Malformed input file.

    Carries ``line`` and ``column`` (1-based) of the offending token.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
