"""Exception hierarchy shared by every module."""


class LabError(ValueError):
    """Base class for all input and numerical errors raised by revlsi."""


class DimensionMismatch(LabError):
    pass


class OutOfDomain(LabError):
    pass


class InsufficientCoverage(LabError):
    pass


class ZeroMass(LabError):
    pass


class DivergentIntegral(LabError):
    pass


class DegenerateSupport(LabError):
    pass


class SingularCovariance(LabError):
    pass


class UnsupportedRepresentation(LabError):
    pass


class UnsupportedDimension(LabError):
    pass


class NonPositiveTrace(LabError):
    pass


class NonPositiveInput(LabError):
    pass


class NonPositiveValue(LabError):
    pass


class NonPositiveSample(LabError):
    pass


class OutOfRange(LabError):
    pass


class RangeViolation(LabError):
    pass
