"""Exception hierarchy shared by every fracdim module."""


class FracdimError(Exception):
    """Base class for all fracdim errors."""


class MalformedInterval(FracdimError):
    """An interval with lo > hi was supplied."""


class EmptySet(FracdimError):
    """An operation that needs a non-empty set received an empty one."""


class NonPositiveScale(FracdimError):
    """A radius or length scale was zero or negative."""


class ScaleOrderViolation(FracdimError):
    """Scales violate the required ordering (e.g. rho >= delta)."""


class CenterNotInSet(FracdimError):
    """A local cover was requested around a point outside the set."""


class TooLarge(FracdimError):
    """Input exceeds the size limit of a brute-force oracle."""


class TooFewScales(FracdimError):
    """Not enough grid scales to form a slope estimate."""


class RatioOutOfRange(FracdimError):
    """A contraction ratio lies outside its admissible open interval."""


class HorizonExceeded(FracdimError):
    """A construction was pushed past its declared index horizon."""


class LevelOutOfRange(FracdimError):
    """A system level index does not exist."""


class DecayViolation(FracdimError):
    """A pullback decay trace violated its geometric bound."""


class NotAutonomous(FracdimError):
    """An operation restricted to autonomous systems got a non-cyclic one."""


class ExponentMismatch(FracdimError):
    """A supplied exponent disagrees with the solved Moran exponent."""


class EmptyRatios(FracdimError):
    """A ratio list that must be non-empty was empty."""


class ParseError(FracdimError):
    """A JSON spec or CLI argument failed to parse or validate."""


class InvariantViolation(FracdimError):
    """An internal exact identity that must always hold was violated."""
