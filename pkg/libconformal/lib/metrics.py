# pylint: disable=invalid-name,too-few-public-methods
"""
(alpha, beta)-metrics F = alpha * phi(beta / alpha): the phi families, evaluation
with singular-domain rules, unit-norm normalization of m-Kropina data and the
(u, v, w) deformation of the pair (alpha, beta)
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from libconformal.lib.base import SmoothMap, TangentSample
from libconformal.lib.constants import VANISHING_NORM
from libconformal.lib.diffgeo import norm_squared
from libconformal.lib.exceptions import (
    ConfigError,
    DomainViolation,
    MetricNotPositiveDefinite,
    NonPositiveMetric,
    VanishingOneForm,
)
from libconformal.lib.fields import MetricField, OneFormField
from libconformal.models import ProfileFit

logger = logging.getLogger(__name__)


class PhiFamily(ABC):
    """
    Profile phi(s) of an (alpha, beta)-metric together with its derivative
    and the rule deciding which rays belong to the metric's domain
    """

    name = "phi"

    # Sampled rays keep |s| above this to stay clear of singular sets
    min_abs_s = 0.0

    # s-interval sampled for the Q(s) fit
    fit_interval = (0.2, 3.0)

    @abstractmethod
    def phi(self, s: float) -> float:
        ...

    @abstractmethod
    def dphi(self, s: float) -> float:
        ...

    def admits(self, beta: float, s: float) -> bool:
        """
        Singular-domain rule on a ray with beta = b_i y^i and s = beta / alpha
        """
        return True

    def q(self, s: float) -> float:
        return self.dphi(s) / (self.phi(s) - s * self.dphi(s))

    def describe(self) -> dict:
        return {"family": self.name}


class Randers(PhiFamily):
    name = "randers"
    fit_interval = (-0.8, 0.8)

    def phi(self, s):
        return 1.0 + s

    def dphi(self, s):
        return 1.0

    def admits(self, beta, s):
        return s > -1.0


def _is_integer(m: float) -> bool:
    return float(m).is_integer()


def _power(s: float, m: float) -> float:
    return float(s ** int(m)) if _is_integer(m) else float(s**m)


def _power_rule(m: float, beta: float) -> bool:
    if _is_integer(m):
        return beta != 0
    return beta > 0


class MKropina(PhiFamily):
    """
    F = beta^m alpha^(1-m), m not in {0, 1}
    """

    name = "m-kropina"
    min_abs_s = 0.05

    def __init__(self, m: float):
        if m in (0, 1):
            raise ConfigError(f"m-Kropina exponent must not be 0 or 1, got {m}")
        self.m = float(m)

    def phi(self, s):
        return _power(s, self.m)

    def dphi(self, s):
        return self.m * _power(s, self.m - 1)

    def admits(self, beta, s):
        return _power_rule(self.m, beta)

    def describe(self):
        return {"family": self.name, "m": self.m}


class Kropina(MKropina):
    """
    F = alpha^2 / beta
    """

    name = "kropina"

    def __init__(self):
        super().__init__(-1.0)

    def describe(self):
        return {"family": self.name}


class MKropinaType(PhiFamily):
    """
    F = (alpha^2 + k beta^2)^((1-m)/2) beta^m
    """

    name = "m-kropina-type"
    min_abs_s = 0.05

    def __init__(self, m: float, k: float):
        if m in (0, 1):
            raise ConfigError(f"m-Kropina exponent must not be 0 or 1, got {m}")
        self.m = float(m)
        self.k = float(k)

    def phi(self, s):
        return (1 + self.k * s * s) ** ((1 - self.m) / 2) * _power(s, self.m)

    def dphi(self, s):
        base = 1 + self.k * s * s
        return (1 - self.m) * self.k * s * base ** ((-1 - self.m) / 2) * _power(
            s, self.m
        ) + self.m * _power(s, self.m - 1) * base ** ((1 - self.m) / 2)

    def admits(self, beta, s):
        return _power_rule(self.m, beta) and 1 + self.k * s * s > 0

    def describe(self):
        return {"family": self.name, "m": self.m, "k": self.k}


class ExpType(PhiFamily):
    """
    F = beta exp(epsilon alpha^2 / beta^2)
    """

    name = "exp"
    min_abs_s = 0.5
    fit_interval = (0.5, 3.0)

    def __init__(self, epsilon: int):
        if epsilon not in (1, -1):
            raise ConfigError(f"Exponential type sign must be +1 or -1, got {epsilon}")
        self.epsilon = int(epsilon)

    def phi(self, s):
        return s * math.exp(self.epsilon / (s * s))

    def dphi(self, s):
        return math.exp(self.epsilon / (s * s)) * (1 - 2 * self.epsilon / (s * s))

    def admits(self, beta, s):
        return beta != 0

    def describe(self):
        return {"family": self.name, "epsilon": self.epsilon}


class General(PhiFamily):
    """
    User-supplied phi and phi' valid on an s-interval
    """

    name = "general"

    def __init__(
        self,
        phi: Callable[[float], float],
        dphi: Callable[[float], float],
        interval: Tuple[float, float],
    ):
        lo, hi = interval
        if lo >= hi:
            raise ConfigError(f"Empty s-interval {interval}")
        self._phi = phi
        self._dphi = dphi
        self.interval = (float(lo), float(hi))
        self.fit_interval = self.interval

    def phi(self, s):
        return float(self._phi(s))

    def dphi(self, s):
        return float(self._dphi(s))

    def admits(self, beta, s):
        lo, hi = self.interval
        return lo < s < hi

    def describe(self):
        return {"family": self.name, "interval": list(self.interval)}


@dataclass(frozen=True)
class AlphaBetaMetric:
    alpha: MetricField
    beta: OneFormField
    phi: PhiFamily


def finsler_value(phi: PhiFamily, alpha: float, beta: float) -> float:
    s = beta / alpha

    if not phi.admits(beta, s):
        raise DomainViolation(
            f"Ray with beta={beta:.3e} is outside the {phi.name} domain"
        )

    value = alpha * phi.phi(s)

    if not math.isfinite(value) or value <= 0:
        raise NonPositiveMetric(f"{phi.name} metric evaluates to {value} at s={s:.3e}")

    return value


def alpha_beta(metric: AlphaBetaMetric, sample: TangentSample) -> Tuple[float, float]:
    g = metric.alpha.at(sample.x)
    alpha = math.sqrt(float(sample.y @ g @ sample.y))
    beta = float(metric.beta.at(sample.x) @ sample.y)
    return alpha, beta


def eval_F(metric: AlphaBetaMetric, sample: TangentSample) -> float:
    """
    F(x, y) = alpha phi(beta / alpha)
    """

    alpha, beta = alpha_beta(metric, sample)
    return finsler_value(metric.phi, alpha, beta)


def profile_q_fit(phi: PhiFamily, points: int = 64, tol: float = 1e-8) -> ProfileFit:
    """
    Fit Q(s) = phi'/(phi - s phi') to k1 s + k2 / s over the fit interval.

    Profiles whose Q has exactly this form are the m-Kropina and exponential
    types, where the generic characterization of conformal fields does not apply.
    """

    lo, hi = phi.fit_interval
    grid = np.linspace(lo, hi, points)
    # Keep away from s = 0 where 1/s blows up
    grid = grid[np.abs(grid) > 1e-3]

    q_values = np.array([phi.q(float(s)) for s in grid])
    design = np.column_stack([grid, 1.0 / grid])

    (k1, k2), *_ = np.linalg.lstsq(design, q_values, rcond=None)
    residual = float(
        np.max(np.abs(design @ np.array([k1, k2]) - q_values))
        / max(1.0, float(np.max(np.abs(q_values))))
    )

    return ProfileFit(
        k1=float(k1), k2=float(k2), residual=residual, special_type=residual <= tol
    )


class NormalizedMetricMap(SmoothMap):
    """
    b^(2m) a_ij
    """

    def __init__(self, a: MetricField, b: OneFormField, m: float):
        super().__init__(a.dim, (a.dim, a.dim), domain=a.components.domain)
        self.a, self.b, self.m = a, b, m

    def value(self, x):
        return _unit_norm_factor(self.a, self.b, x) ** self.m * self.a.at(x)


class NormalizedOneFormMap(SmoothMap):
    """
    b^(m-1) b_i
    """

    def __init__(self, a: MetricField, b: OneFormField, m: float):
        super().__init__(a.dim, (a.dim,), domain=b.components.domain)
        self.a, self.b, self.m = a, b, m

    def value(self, x):
        return _unit_norm_factor(self.a, self.b, x) ** ((self.m - 1) / 2) * self.b.at(x)


def _unit_norm_factor(a: MetricField, b: OneFormField, x) -> float:
    b2 = norm_squared(a, b, x)
    if b2 <= VANISHING_NORM:
        raise VanishingOneForm(f"||beta||_alpha vanishes at x={np.asarray(x).tolist()}")
    return b2


def kropina_normalize(
    a: MetricField, b: OneFormField, m: float
) -> Tuple[MetricField, OneFormField]:
    """
    Rescale (a, b) to a pair with unit alpha-norm describing the same
    m-Kropina metric: a -> b^(2m) a, b -> b^(m-1) b
    """

    if m in (0, 1):
        raise ConfigError(f"m-Kropina exponent must not be 0 or 1, got {m}")

    return (
        MetricField(NormalizedMetricMap(a, b, m)),
        OneFormField(NormalizedOneFormMap(a, b, m)),
    )


@dataclass(frozen=True)
class ScalarCurve:
    """
    Scalar function of t = b^2 with its first derivative
    """

    value: Callable[[float], float]
    derivative: Callable[[float], float]
    label: str = ""

    def __call__(self, t: float) -> float:
        return float(self.value(t))

    @classmethod
    def constant(cls, c: float) -> "ScalarCurve":
        return cls(lambda t: c, lambda t: 0.0, label=f"{c:g}")


@dataclass(frozen=True)
class DeformationTriple:
    """
    (u, v, w) defining alpha~^2 = u(b^2) alpha^2 + v(b^2) beta^2 and beta~ = w(b^2) beta
    """

    u: ScalarCurve
    v: ScalarCurve
    w: ScalarCurve
    epsilon: int
    special: bool = False

    @classmethod
    def special_solution(cls, epsilon: int) -> "DeformationTriple":
        """
        u = 1, v = 1 - 1/t, w = exp(-epsilon/t)
        """
        return cls(
            u=ScalarCurve.constant(1.0),
            v=ScalarCurve(lambda t: 1 - 1 / t, lambda t: 1 / t**2, label="1-1/t"),
            w=ScalarCurve(
                lambda t: math.exp(-epsilon / t),
                lambda t: epsilon / t**2 * math.exp(-epsilon / t),
                label=f"exp({-epsilon}/t)",
            ),
            epsilon=epsilon,
            special=True,
        )

    @classmethod
    def identity(cls, epsilon: int) -> "DeformationTriple":
        return cls(
            u=ScalarCurve.constant(1.0),
            v=ScalarCurve.constant(0.0),
            w=ScalarCurve.constant(1.0),
            epsilon=epsilon,
        )

    def scaled(self, factor: float) -> "DeformationTriple":
        """
        Same triple with w replaced by factor * w
        """
        w = self.w
        return DeformationTriple(
            u=self.u,
            v=self.v,
            w=ScalarCurve(
                lambda t: factor * w.value(t),
                lambda t: factor * w.derivative(t),
                label=f"{factor:g}*{w.label}",
            ),
            epsilon=self.epsilon,
            special=self.special,
        )


def deformation_ode_residual(
    triple: DeformationTriple, t: float
) -> Tuple[float, float]:
    """
    Residuals of u' = u w'/w - epsilon u / t^2 and v' = v w'/w - (epsilon v - u) / t^2
    """

    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")

    u, v, w = triple.u(t), triple.v(t), triple.w(t)
    if w == 0:
        raise ValueError(f"w vanishes at t={t}")

    log_w = triple.w.derivative(t) / w
    eps = triple.epsilon

    res_u = triple.u.derivative(t) - (u * log_w - eps * u / t**2)
    res_v = triple.v.derivative(t) - (v * log_w - (eps * v - u) / t**2)

    return float(res_u), float(res_v)


def _deformed_at(a: MetricField, b: OneFormField, triple: DeformationTriple, x):
    g = a.at(x)
    form = b.at(x)
    t = float(form @ np.linalg.solve(g, form))

    u = triple.u(t)
    if u <= 0:
        raise MetricNotPositiveDefinite(
            f"u(b^2)={u:.3e} is not positive at x={np.asarray(x).tolist()}"
        )

    deformed = u * g + triple.v(t) * np.outer(form, form)

    try:
        np.linalg.cholesky(deformed)
    except np.linalg.LinAlgError as exc:
        raise MetricNotPositiveDefinite(
            f"Deformed metric is not positive definite at x={np.asarray(x).tolist()}"
        ) from exc

    return deformed, triple.w(t) * form


def deform_pair(
    a: MetricField, b: OneFormField, triple: DeformationTriple, x
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Deformed components u a_ij + v b_i b_j and w b_i at x
    """

    return _deformed_at(a, b, triple, np.asarray(x, dtype=float))


class DeformedMetricMap(SmoothMap):
    def __init__(self, a: MetricField, b: OneFormField, triple: DeformationTriple):
        super().__init__(a.dim, (a.dim, a.dim), domain=a.components.domain)
        self.a, self.b, self.triple = a, b, triple

    def value(self, x):
        return _deformed_at(self.a, self.b, self.triple, x)[0]


class DeformedOneFormMap(SmoothMap):
    def __init__(self, a: MetricField, b: OneFormField, triple: DeformationTriple):
        super().__init__(a.dim, (a.dim,), domain=b.components.domain)
        self.a, self.b, self.triple = a, b, triple

    def value(self, x):
        return _deformed_at(self.a, self.b, self.triple, x)[1]


def deformed_fields(
    a: MetricField, b: OneFormField, triple: DeformationTriple
) -> Tuple[MetricField, OneFormField]:
    return (
        MetricField(DeformedMetricMap(a, b, triple)),
        OneFormField(DeformedOneFormMap(a, b, triple)),
    )


def phi_from_description(description: Optional[dict]) -> PhiFamily:
    """
    Build a PhiFamily from its configuration document entry
    """

    description = description or {"family": "kropina"}
    family = description.get("family")

    try:
        return _phi_from_family(family, description)
    except KeyError as exc:
        raise ConfigError(f"Metric family {family} needs parameter {exc}") from exc


def _phi_from_family(family: str, description: dict) -> PhiFamily:
    if family == "randers":
        return Randers()
    if family == "kropina":
        return Kropina()
    if family == "m-kropina":
        return MKropina(description["m"])
    if family == "m-kropina-type":
        return MKropinaType(description["m"], description["k"])
    if family == "exp":
        return ExpType(description["epsilon"])
    if family == "general":
        phi = np.polynomial.Polynomial(description["coefficients"])
        return General(phi, phi.deriv(), tuple(description["interval"]))

    raise ConfigError(f"Unknown metric family: {family}")
