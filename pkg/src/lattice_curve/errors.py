"""Exception types raised across the package."""


class LatticeCurveError(ValueError):
    """Base class; every error carries a human-readable message."""


class DegenerateBasis(LatticeCurveError):
    pass


class NotLatticePoint(LatticeCurveError):
    pass


class CollinearPoints(LatticeCurveError):
    pass


class OutOfDomain(LatticeCurveError):
    pass


class QuadratureFailure(LatticeCurveError):
    pass


class NotPositiveDefinite(LatticeCurveError):
    pass


class MixedCurvature(LatticeCurveError):
    pass


class ClosureError(LatticeCurveError):
    pass


class WrongCurveKind(LatticeCurveError):
    pass


class TooManyCandidates(LatticeCurveError):
    pass


class NotIntegerInstance(LatticeCurveError):
    pass


class PerturbationTooLarge(LatticeCurveError):
    pass


class ChordTooLong(LatticeCurveError):
    pass


class DeltaNotAdmissible(LatticeCurveError):
    pass


class ArcTooLong(LatticeCurveError):
    pass


class ConfigInvalid(LatticeCurveError):
    pass


class FewerThanThreeIntersections(LatticeCurveError):
    pass
