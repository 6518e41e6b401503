"""
Errors
Exception hierarchy for curve, model, solver and analysis failures
"""


class MaganisoError(Exception):
    """Base class for all library errors"""


class ConfigParseError(MaganisoError):
    """Model config, curve file or environment setting could not be parsed"""


class UsageError(MaganisoError):
    """Command-line arguments are malformed"""


# Principal curves

class CurveError(MaganisoError):
    """Invalid principal B-H curve"""


class NonPositiveCoefficient(CurveError):
    pass


class NonMonotoneData(CurveError):
    pass


class MissingOrigin(CurveError):
    pass


class TooFewSamples(CurveError):
    pass


class NegativeEnergy(CurveError):
    pass


# Implicit model

class ModelError(MaganisoError):
    """Invalid implicit model or evaluation point"""


class InvalidExponent(ModelError):
    pass


class NonPositiveLevel(ModelError):
    pass


class InvalidPoint(ModelError):
    pass


# Scalar and vector solvers

class SolverError(MaganisoError):
    """Iterative solver did not produce a certified result"""


class NoBracket(SolverError):
    pass


class MaxIterExceeded(SolverError):
    pass


class NewtonDiverged(SolverError):
    pass


# Material law

class LawError(MaganisoError):
    """Derivative of the (co)energy is not available at the point"""


class ExponentTooSmall(LawError):
    pass


class DegenerateDiscriminant(LawError):
    pass


class AxisSingularity(LawError):
    pass


class OriginSingularity(LawError):
    pass


# Closed form models

class ClosedFormError(MaganisoError):
    """Invalid explicit model"""


class ExponentNotConjugable(ClosedFormError):
    pass


class ProportionalityViolated(ClosedFormError):
    pass


# Analysis

class AnalysisError(MaganisoError):
    """Analysis tool could not produce a trustworthy result"""


class ArgmaxOnBoundary(AnalysisError):
    pass
