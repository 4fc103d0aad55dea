"""Exception types for pattern validation and edit rejection.

Every rejected operation maps to one of these; the class name doubles as the
machine-readable reason string carried by EditResult and the HTTP API.
"""


class PatternError(Exception):
    """Base class for all engine errors."""

    @property
    def reason(self) -> str:
        return type(self).__name__


# -- configuration / document ------------------------------------------------

class InvalidConfig(PatternError):
    pass


class CorruptDocument(PatternError):
    pass


# -- phase-1 geometry ---------------------------------------------------------

class OffGrid(PatternError):
    pass


class SelfIntersecting(PatternError):
    pass


class NotClosed(PatternError):
    pass


class MultiComponent(PatternError):
    pass


class PanelTooLarge(PatternError):
    pass


class PhaseViolation(PatternError):
    pass


class NotOnGrid(PatternError):
    pass


class DuplicateBreak(PatternError):
    pass


class UnknownRef(PatternError):
    pass


# -- stitching ----------------------------------------------------------------

class LengthMismatch(PatternError):
    pass


class AlreadySeamed(PatternError):
    pass


class SelfSeam(PatternError):
    pass


class UnstitchedDanglingState(PatternError):
    pass


# -- seam matching ------------------------------------------------------------

class RatioViolation(PatternError):
    pass


class InfeasibleFold(PatternError):
    pass


# -- feature edits ------------------------------------------------------------

class OrderViolation(PatternError):
    pass


class FeatureInWay(PatternError):
    pass


class DisconnectionHazard(PatternError):
    pass


class AlreadyGathered(PatternError):
    pass


class NotInSeam(PatternError):
    pass


class AlreadyPleat(PatternError):
    pass


class InvalidFeature(PatternError):
    pass


class InsufficientSpace(PatternError):
    pass


class DartOverlap(PatternError):
    pass


class NonUniversalOnSeam(PatternError):
    pass


class GatheredSeam(PatternError):
    pass


# -- decomposition ------------------------------------------------------------

class Infeasible(PatternError):
    pass


class TooLarge(PatternError):
    pass


# -- export -------------------------------------------------------------------

class PieceTooWide(PatternError):
    pass


class MissingAlignment(PatternError):
    pass


class DegeneratePanel(PatternError):
    pass


class ResolutionMismatch(PatternError):
    pass
