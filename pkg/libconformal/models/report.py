# pylint: disable=missing-docstring,too-many-instance-attributes

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from libconformal.lib.constants import PointStatus


@dataclass
class PointResult:
    """
    Outcome of one check at one sample point
    """

    index: int
    x: Tuple[float, ...]
    residual: Optional[float] = None
    fitted: Dict[str, float] = field(default_factory=dict)
    components: Dict[str, float] = field(default_factory=dict)
    status: str = PointStatus.OK.value
    reason: Optional[str] = None
    warnings: List[str] = field(default_factory=list)


@dataclass
class CheckResult:
    tag: str
    verdict: str
    tolerance: float
    residual_max: Optional[float]
    residual_mean: Optional[float]
    points: List[PointResult] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)


@dataclass
class VerificationReport:
    generated_at: str
    version: str
    scenario: Dict[str, Any]
    environment: Dict[str, Any]
    checks: Dict[str, CheckResult]
    overall_pass: bool
    exit_status: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
