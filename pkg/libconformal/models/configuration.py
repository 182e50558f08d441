# pylint: disable=missing-docstring,too-many-instance-attributes

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from libconformal.lib.constants import (
    DEFAULT_RAY_COUNT,
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SEED,
    Scheme,
)


@dataclass
class RunConfig:
    """
    A validated run configuration document with command-line overrides applied
    """

    scenario: Dict[str, Any]
    checks: List[str]
    samples: int = DEFAULT_SAMPLE_COUNT
    seed: int = DEFAULT_SEED
    rays: int = DEFAULT_RAY_COUNT
    tolerances: Dict[str, float] = field(default_factory=dict)
    scheme: Scheme = Scheme.ANALYTIC
    deformation: str = "special"
    report: Optional[Path] = None
    jobs: int = 1

    @classmethod
    def from_document(cls, document: Dict[str, Any]) -> "RunConfig":
        samples = document.get("samples", {})
        report = document.get("report")

        return cls(
            scenario=document["scenario"],
            checks=list(document["checks"]),
            samples=samples.get("count", DEFAULT_SAMPLE_COUNT),
            seed=samples.get("seed", DEFAULT_SEED),
            rays=samples.get("rays", DEFAULT_RAY_COUNT),
            tolerances=dict(document.get("tolerances", {})),
            scheme=Scheme(document.get("scheme", Scheme.ANALYTIC.value)),
            deformation=document.get("deformation", "special"),
            report=Path(report) if report else None,
            jobs=document.get("jobs", 1),
        )

    def to_document(self) -> Dict[str, Any]:
        document = {
            "scenario": self.scenario,
            "checks": self.checks,
            "samples": {"count": self.samples, "seed": self.seed, "rays": self.rays},
            "tolerances": self.tolerances,
            "scheme": self.scheme.value,
            "deformation": self.deformation,
            "jobs": self.jobs,
        }
        if self.report:
            document["report"] = str(self.report)
        return document
