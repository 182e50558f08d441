"""
Custom exceptions
"""


class ConformalException(Exception):
    """
    Base exception class for libconformal's custom exceptions
    """


class ConfigError(ConformalException):
    """
    Run configuration cannot be used
    """


class DomainError(ConformalException):
    """
    A point or a ray lies outside the region where an object is defined
    """


class PointTooCloseToBoundary(DomainError):
    """
    Difference stencil would leave the scenario box
    """


class DomainViolation(DomainError):
    """
    Tangent sample breaks the singular-domain rule of a metric family
    """


class NonPositiveMetric(DomainError):
    """
    Finsler function is not positive at a sample
    """


class NonFiniteEvaluation(ConformalException):
    """
    A field or a function evaluated to nan or inf
    """


class MetricNotPositiveDefinite(ConformalException):
    """
    Cholesky factorization of a metric failed
    """


class VanishingOneForm(ConformalException):
    """
    The alpha-norm of beta vanishes at a point where it must not
    """


class PreconditionError(ConformalException):
    """
    An operation was called outside of its stated hypotheses
    """


class UnitNormRequired(PreconditionError):
    """
    The one-form must have unit alpha-norm
    """


class OdeConditionViolated(PreconditionError):
    """
    Deformation triple does not solve the deformation ODE
    """


class FitNotConformal(PreconditionError):
    """
    A check needs a positive conformal fit that is not available
    """


class DegenerateFitError(ConformalException):
    """
    Least squares system has no usable equation
    """


class InsufficientSamples(ConformalException):
    """
    Too few points or rays for a statistic
    """


class SamplingError(ConformalException):
    """
    Unable to draw an admissible sample
    """


class ConstraintViolation(ConformalException):
    """
    Scenario parameters do not satisfy a defining constraint
    """

    def __init__(self, constraint: str, defect: float):
        self.constraint = constraint
        self.defect = defect
        super().__init__(f"Constraint {constraint} violated, defect: {defect:.3e}")
