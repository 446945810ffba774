"""Exception and warning classes raised across the package."""


class NormalisError(ValueError):
    """Base class for every error raised by normalis."""


class DegeneratePair(NormalisError):
    pass


class AntipodalPair(NormalisError):
    pass


class CollinearArcs(NormalisError):
    pass


class DuplicatePoint(NormalisError):
    pass


class NotUnitNorm(NormalisError):
    pass


class TooFewPoints(NormalisError):
    pass


class WrongSpace(NormalisError):
    pass


class DegenerateHull(NormalisError):
    pass


class NotAnEquivalence(NormalisError):
    """Crossing arcs disagree on midpoint or length."""


class ReductionInvariantViolated(NormalisError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EmbeddingError(NormalisError):
    pass


class LiftMismatch(NormalisError):
    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class BadParameter(NormalisError):
    pass


class DuplicateAngle(BadParameter):
    pass


class InfeasibleSideLength(BadParameter):
    pass


class NoTriangularFace(NormalisError):
    pass


class BoundViolation(NormalisError):
    """A configuration beat a proven bound; carries the witness points."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class OutOfStatedRange(UserWarning):
    """Bound evaluated outside the range where it is asserted."""


class ParseError(NormalisError):
    """Malformed point-set file; ``line`` and ``col`` are 1-based."""

    def __init__(self, message, line=None, col=None):
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.col = col
