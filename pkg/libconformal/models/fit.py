# pylint: disable=missing-docstring,invalid-name

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple


@dataclass
class ConformalFit:
    family: str
    c_hat: float
    tau_hat: Optional[float]
    residual_S: float
    residual_M: float
    conformal: bool
    reduced_rank: bool = False
    x: Tuple[float, ...] = ()

    @property
    def residual(self) -> float:
        return max(self.residual_S, self.residual_M)


@dataclass
class DirectFit:
    c_hat: float
    defect: float
    rays: int
    x: Tuple[float, ...] = ()


@dataclass
class FactorField:
    """
    Fitted conformal factors over the points where a fit was positive
    """

    points: List[Tuple[float, ...]]
    values: List[float]

    @property
    def count(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return sum(self.values) / len(self.values) if self.values else 0.0

    @property
    def spread(self) -> float:
        return max(self.values) - min(self.values) if self.values else 0.0


class Homothety(str, Enum):
    HOMOTHETIC = "homothetic"
    NON_HOMOTHETIC = "non-homothetic"
    INCONCLUSIVE = "inconclusive"


@dataclass
class HomothetyReport:
    verdict: Homothety
    killing: bool
    mean: float
    spread: float
    gradient_estimate: float
    count: int


@dataclass
class ClassReport:
    condition: str
    fitted: Dict[str, float]
    residual: float
    holds: bool
    components: Dict[str, float] = field(default_factory=dict)


@dataclass
class TauSigmaReport:
    sigma_residual: float
    tau_residual: float
    beta_conformal_residual: float
    differences: List[float]
    hypotheses_hold: bool
    spread: Optional[float] = None
    constant: Optional[bool] = None


@dataclass
class DeformedLift:
    alpha_residual: float
    beta_residual: float
    special_residual: Optional[float] = None

    @property
    def residual(self) -> float:
        values = [self.alpha_residual, self.beta_residual]
        if self.special_residual is not None:
            values.append(self.special_residual)
        return max(values)


@dataclass
class FactorComparison:
    """
    Ratio between fitted and expected conformal factors, among the known conventions
    """

    kappa: float
    max_error: float
    matched: bool
    convention: float = 1.0
    verdict: str = "pass"


@dataclass
class ProfileFit:
    """
    Least squares fit of Q(s) = phi'/(phi - s phi') against k1 s + k2 / s
    """

    k1: float
    k2: float
    residual: float
    special_type: bool
