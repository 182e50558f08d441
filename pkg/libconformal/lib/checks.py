# pylint: disable=invalid-name,too-few-public-methods
"""
One class per check tag. A check measures a residual at each sample point and
reduces the point results of a run to a verdict.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from libconformal.lib.base import DiffConfig, TangentSample
from libconformal.lib.catalog import (
    Scenario,
    profile_ode_residual,
    scenario_from_document,
)
from libconformal.lib.classification import (
    closedness_residual,
    douglas_kropina_residual,
    einstein_residual,
    exp_class_residual,
    killing_residual,
    mkropina_class_residual,
    scalar_curvature,
)
from libconformal.lib.conformal import (
    FitFamily,
    FitModel,
    compare_factor,
    deformed_lift_check,
    direct_defect,
    fit_conformal,
    homothety_test,
    lift_b_norm_check,
    lift_identity_residuals,
    tau_sigma_test,
)
from libconformal.lib.constants import (
    CENTRAL2_TOLERANCE_FLOOR,
    DEFAULT_RAY_COUNT,
    DEFAULT_SEED,
    DEFAULT_TOLERANCES,
    CheckTag,
    PointStatus,
    Scheme,
    Verdict,
)
from libconformal.lib.diffgeo import norm_squared
from libconformal.lib.exceptions import (
    ConfigError,
    ConformalException,
    PreconditionError,
    SamplingError,
    VanishingOneForm,
)
from libconformal.lib.metrics import (
    DeformationTriple,
    ExpType,
    MKropina,
    MKropinaType,
    deformation_ode_residual,
    profile_q_fit,
)
from libconformal.lib.sampling import sample_rays
from libconformal.models import (
    CheckResult,
    FactorField,
    Homothety,
    PointResult,
    RunConfig,
)

logger = logging.getLogger(__name__)

# A point where one of these is raised cannot be checked, which is not a failure
NOT_APPLICABLE_ERRORS = (PreconditionError, SamplingError, VanishingOneForm)

SEVERITY = {
    Verdict.PASS: 0,
    Verdict.WARN: 1,
    Verdict.NOT_APPLICABLE: 2,
    Verdict.FAIL: 3,
}

DEFORMATIONS = {
    "special": DeformationTriple.special_solution,
    "identity": DeformationTriple.identity,
}

# t-grid of the deformation ODE check
ODE_GRID = np.linspace(0.5, 3.0, 100)


def worst(verdicts: Sequence[Verdict]) -> Verdict:
    return max(verdicts, key=SEVERITY.get, default=Verdict.PASS)


@dataclass
class CheckContext:
    scenario: Scenario
    cfg: DiffConfig
    tolerance: float
    rays: int = DEFAULT_RAY_COUNT
    seed: int = DEFAULT_SEED
    deformation: str = "special"


class Check(ABC):
    """
    Base class for checks
    """

    tag: CheckTag
    description = ""

    def __init__(self, context: CheckContext):
        self.context = context

    @property
    def scenario(self) -> Scenario:
        return self.context.scenario

    @property
    def cfg(self) -> DiffConfig:
        return self.context.cfg

    @property
    def tolerance(self) -> float:
        return self.context.tolerance

    def validate(self) -> None:
        """
        Raise ConfigError when the scenario cannot be checked at all
        """

    def rays(self, index: int, x: np.ndarray, count: int = None) -> List[np.ndarray]:
        return sample_rays(
            self.scenario.metric,
            x,
            count or self.context.rays,
            self.context.seed,
            index,
        )

    @abstractmethod
    def measure(self, index: int, x: np.ndarray) -> PointResult:
        ...

    def passes(self, point: PointResult) -> bool:
        return point.residual is not None and point.residual <= self.tolerance

    def evaluate(self, index: int, x) -> PointResult:
        """
        Measure at one point, turning library exceptions into point statuses
        """

        x = np.asarray(x, dtype=float)
        coordinates = tuple(float(v) for v in x)

        try:
            point = self.measure(index, x)

        except NOT_APPLICABLE_ERRORS as exc:
            logger.debug(f"Point {index} not applicable to {self.tag.value}: {exc}")
            return PointResult(
                index=index,
                x=coordinates,
                status=PointStatus.NOT_APPLICABLE.value,
                reason=str(exc),
            )

        except ConformalException as exc:
            logger.info(f"Skipping point {index} for {self.tag.value}, reason: {exc}")
            logger.debug(exc, exc_info=True)
            return PointResult(
                index=index,
                x=coordinates,
                status=PointStatus.FAILED.value,
                reason=str(exc),
            )

        if not self.passes(point):
            point.status = PointStatus.FAILED.value
            point.reason = point.reason or "residual above tolerance"

        return point

    def summarize(self, points: List[PointResult]) -> Tuple[Dict, List[Verdict]]:
        """
        Check-specific details over the points that passed, with any verdicts they imply
        """

        return {}, []

    def reduce(self, points: List[PointResult]) -> CheckResult:
        points = sorted(points, key=lambda point: point.index)
        statuses = {point.status for point in points}
        residuals = [point.residual for point in points if point.residual is not None]

        if not points or statuses == {PointStatus.NOT_APPLICABLE.value}:
            verdict = Verdict.NOT_APPLICABLE
        elif PointStatus.FAILED.value in statuses:
            verdict = Verdict.FAIL
        elif PointStatus.NOT_APPLICABLE.value in statuses or any(
            point.warnings for point in points
        ):
            verdict = Verdict.WARN
        else:
            verdict = Verdict.PASS

        details, verdicts = self.summarize(
            [point for point in points if point.status == PointStatus.OK.value]
        )

        return CheckResult(
            tag=self.tag.value,
            verdict=worst([verdict] + verdicts).value,
            tolerance=self.tolerance,
            residual_max=float(max(residuals)) if residuals else None,
            residual_mean=float(np.mean(residuals)) if residuals else None,
            points=points,
            details=details,
        )

    def _point(self, index, x, residual, **kwargs) -> PointResult:
        return PointResult(
            index=index,
            x=tuple(float(v) for v in x),
            residual=float(residual),
            **kwargs,
        )

    def _require_phi(self, *families) -> None:
        if not isinstance(self.scenario.phi, families):
            names = ", ".join(family.name for family in families)
            raise ConfigError(
                f"Check {self.tag.value} needs a metric of type {names}, "
                f"scenario {self.scenario.name} uses {self.scenario.phi.name}"
            )


class FactorCheck(Check):
    """
    Checks producing a conformal factor c at each point, compared with the
    scenario's expected factor and tested for homothety
    """

    def summarize(self, points):
        details, verdicts = {}, []

        if not points:
            return details, verdicts

        expected = self.scenario.expected
        values = [point.fitted["c"] for point in points]

        if expected.factor is not None:
            comparison = compare_factor(
                values,
                [expected.factor(np.array(point.x)) for point in points],
                self.tolerance,
                convention=expected.factor_convention,
            )
            details["factor"] = asdict(comparison)
            verdicts.append(Verdict(comparison.verdict))

        if expected.tau is not None and all("tau" in point.fitted for point in points):
            errors = [
                abs(point.fitted["tau"] - expected.tau(np.array(point.x)))
                / max(1.0, abs(expected.tau(np.array(point.x))))
                for point in points
            ]
            details["tau_error"] = float(max(errors))
            if details["tau_error"] > self.tolerance:
                verdicts.append(Verdict.FAIL)

        homothety = homothety_test(
            FactorField(points=[point.x for point in points], values=values),
            self.tolerance,
        )
        details["homothety"] = {**asdict(homothety), "verdict": homothety.verdict.value}
        verdicts.extend(self._homothety_verdicts(homothety))

        return details, verdicts

    def _homothety_verdicts(self, homothety) -> List[Verdict]:
        expected = self.scenario.expected

        if expected.homothetic is None and expected.killing is None:
            return []

        if homothety.verdict is Homothety.INCONCLUSIVE:
            logger.warning(
                f"Too few positive points ({homothety.count}) for a homothety verdict"
            )
            return [Verdict.WARN]

        homothetic = homothety.verdict is Homothety.HOMOTHETIC

        if expected.homothetic is not None and homothetic != expected.homothetic:
            logger.warning(
                f"Expected a {'homothetic' if expected.homothetic else 'non-homothetic'} "
                f"field, found {homothety.verdict.value}"
            )
            return [Verdict.FAIL]

        if expected.killing is not None and homothety.killing != expected.killing:
            return [Verdict.FAIL]

        return []


class LiftIdentityCheck(Check):
    tag = CheckTag.LIFT_IDENTITY
    description = "Complete lifts of alpha^2, beta and F^2 against S, M and phi"

    def measure(self, index, x):
        components = {"alpha": 0.0, "beta": 0.0, "profile": 0.0}
        metric = self.scenario.metric

        for y in self.rays(index, x):
            residuals = lift_identity_residuals(
                metric, self.scenario.V, TangentSample(x, y), self.cfg
            )
            for key, value in residuals.items():
                components[key] = max(components[key], value)

        return self._point(index, x, max(components.values()), components=components)


class FitCheck(FactorCheck):
    model: FitModel

    def measure(self, index, x):
        fit = fit_conformal(
            self.model,
            self.scenario.a,
            self.scenario.b,
            self.scenario.V,
            x,
            self.cfg,
            self.tolerance,
        )

        fitted = {"c": fit.c_hat}
        if fit.tau_hat is not None:
            fitted["tau"] = fit.tau_hat

        return self._point(
            index,
            x,
            fit.residual,
            fitted=fitted,
            components={"S": fit.residual_S, "M": fit.residual_M},
            warnings=["reduced-rank fit"] if fit.reduced_rank else [],
        )


class GenericFitCheck(FitCheck):
    tag = CheckTag.CONFORMAL_GENERIC
    description = "S = 4c a and M = 2c b"
    model = FitModel(FitFamily.GENERIC)

    def summarize(self, points):
        details, verdicts = super().summarize(points)
        profile = profile_q_fit(self.scenario.phi)
        details["profile"] = asdict(profile)

        if profile.special_type:
            logger.warning(
                f"Profile of {self.scenario.phi.name} has Q(s) = {profile.k1:.3g} s + {profile.k2:.3g} / s, "
                "the generic characterization does not apply to it"
            )

        return details, verdicts


class UnitKropinaFitCheck(FitCheck):
    tag = CheckTag.CONFORMAL_UNIT_KROPINA
    description = "S = 4c a and M = 2c b with ||beta||_alpha = 1"
    model = FitModel(FitFamily.UNIT_KROPINA)

    def validate(self):
        self._require_phi(MKropina)


class ExpFitCheck(FitCheck):
    tag = CheckTag.CONFORMAL_EXP
    description = "S = 2 tau a + eps (2c - tau) b b and M = tau b"

    def validate(self):
        self._require_phi(ExpType)

    @property
    def model(self):
        return FitModel(FitFamily.EXP_TYPE, epsilon=self.scenario.phi.epsilon)


class KropinaTypeFitCheck(FitCheck):
    tag = CheckTag.CONFORMAL_KROPINA_TYPE
    description = "m-Kropina type tensor equations in (c, tau)"

    def validate(self):
        self._require_phi(MKropinaType, MKropina)

    @property
    def model(self):
        phi = self.scenario.phi
        return FitModel(FitFamily.KROPINA_TYPE, m=phi.m, k=getattr(phi, "k", 0.0))


class DirectDefectCheck(FactorCheck):
    tag = CheckTag.DIRECT_DEFECT
    description = "V^c(F^2) = 4c F^2 over sampled rays"

    def measure(self, index, x):
        count = max(self.context.rays, x.size + 1)
        fit = direct_defect(
            self.scenario.metric,
            self.scenario.V,
            x,
            self.rays(index, x, count),
            self.cfg,
        )
        return self._point(index, x, fit.defect, fitted={"c": fit.c_hat})


class DouglasKropinaCheck(Check):
    tag = CheckTag.DOUGLAS_KROPINA
    description = "s_ij = (b_i s_j - b_j s_i) / b^2"

    def measure(self, index, x):
        residual = douglas_kropina_residual(
            self.scenario.a, self.scenario.b, x, self.cfg
        )
        return self._point(index, x, residual)


class KropinaClassCheck(Check):
    tag = CheckTag.KROPINA_CLASS
    description = "Douglas (or Landsberg for m = -1) equations of the m-Kropina metric"

    def validate(self):
        self._require_phi(MKropina)

    def measure(self, index, x):
        m = self.scenario.phi.m
        report = mkropina_class_residual(
            self.scenario.a,
            self.scenario.b,
            m,
            x,
            self.cfg,
            tol=self.tolerance,
            landsberg=m == -1,
        )
        return self._point(
            index,
            x,
            report.residual,
            fitted=report.fitted,
            components=report.components,
        )


class ExpClassCheck(Check):
    tag = CheckTag.EXP_CLASS
    description = "Douglas equations of the exponential metric"

    def validate(self):
        self._require_phi(ExpType)

    def measure(self, index, x):
        report = exp_class_residual(
            self.scenario.a,
            self.scenario.b,
            self.scenario.phi.epsilon,
            x,
            self.cfg,
            tol=self.tolerance,
        )
        return self._point(
            index,
            x,
            report.residual,
            fitted=report.fitted,
            components=report.components,
        )


class KillingCheck(Check):
    tag = CheckTag.KILLING
    description = "r_ij = 0"

    def measure(self, index, x):
        return self._point(
            index, x, killing_residual(self.scenario.a, self.scenario.b, x, self.cfg)
        )


class EinsteinCheck(Check):
    tag = CheckTag.EINSTEIN
    description = "Ric = (R/n) a"

    def measure(self, index, x):
        residual = einstein_residual(self.scenario.a, x, self.cfg)
        fitted = {}

        if self.scenario.dim == 2:
            fitted["scalar_curvature"] = scalar_curvature(self.scenario.a, x, self.cfg)

        return self._point(index, x, residual, fitted=fitted)


class ClosedCheck(Check):
    tag = CheckTag.CLOSED
    description = "d beta = 0"

    def measure(self, index, x):
        return self._point(index, x, closedness_residual(self.scenario.b, x, self.cfg))


class TauSigmaCheck(Check):
    """
    Hypotheses S = sigma a, M = tau b, r = rho a at every point, then tau - sigma
    constant over the sample. Failing hypotheses make the check not applicable.
    """

    tag = CheckTag.TAU_SIGMA
    description = "tau - sigma constant when S, M and r are proportional to a, b, a"

    def measure(self, index, x):
        report = tau_sigma_test(
            self.scenario.a,
            self.scenario.b,
            self.scenario.V,
            [x],
            self.cfg,
            self.tolerance,
        )
        components = {
            "sigma": report.sigma_residual,
            "tau": report.tau_residual,
            "beta_conformal": report.beta_conformal_residual,
        }
        return self._point(
            index,
            x,
            max(components.values()),
            fitted={"tau_minus_sigma": report.differences[0]},
            components=components,
        )

    def passes(self, point):
        return point.residual is not None

    def summarize(self, points):
        if not points:
            return {}, []

        residuals = {
            key: float(max(point.components[key] for point in points))
            for key in ("sigma", "tau", "beta_conformal")
        }
        details = {f"{key}_residual": value for key, value in residuals.items()}

        if max(residuals.values()) > self.tolerance:
            logger.info(
                f"tau-sigma hypotheses fail, largest residual: {max(residuals.values()):.3e}"
            )
            details["hypotheses_hold"] = False
            return details, [Verdict.NOT_APPLICABLE]

        differences = [point.fitted["tau_minus_sigma"] for point in points]
        spread = float(max(differences) - min(differences))
        mean = float(np.mean(differences))
        details.update(
            {"hypotheses_hold": True, "spread": spread, "mean": mean}
        )

        constant = spread <= self.tolerance * max(1.0, abs(mean))
        details["constant"] = constant

        return details, [] if constant else [Verdict.FAIL]


class ExpCheck(Check):
    """
    Checks built on a positive exponential-type fit
    """

    def validate(self):
        self._require_phi(ExpType)

    @property
    def epsilon(self) -> int:
        return self.scenario.phi.epsilon

    @property
    def triple(self) -> DeformationTriple:
        try:
            return DEFORMATIONS[self.context.deformation](self.epsilon)
        except KeyError as exc:
            raise ConfigError(
                f"Unknown deformation: {self.context.deformation}"
            ) from exc


class BNormFlowCheck(ExpCheck):
    tag = CheckTag.B_NORM_FLOW
    description = "V^c(b^2) = eps (tau - 2c) b^4"

    def measure(self, index, x):
        residual = lift_b_norm_check(
            self.scenario.a,
            self.scenario.b,
            self.scenario.V,
            x,
            self.epsilon,
            self.cfg,
            self.tolerance,
        )
        return self._point(index, x, residual)


class DeformationLiftCheck(ExpCheck):
    tag = CheckTag.DEFORMATION_LIFT
    description = "Lifts of the deformed pair (u a + v b b, w b)"

    def validate(self):
        super().validate()
        _ = self.triple

    def measure(self, index, x):
        result = deformed_lift_check(
            self.scenario.a,
            self.scenario.b,
            self.scenario.V,
            self.triple,
            x,
            self.rays(index, x),
            self.cfg,
            self.tolerance,
        )

        components = {"alpha": result.alpha_residual, "beta": result.beta_residual}
        if result.special_residual is not None:
            components["special"] = result.special_residual

        return self._point(index, x, result.residual, components=components)


class DeformationOdeCheck(ExpCheck):
    tag = CheckTag.DEFORMATION_ODE
    description = "Deformation triple solves the (u, v, w) ODE"

    def validate(self):
        super().validate()
        _ = self.triple

    def measure(self, index, x):
        t = norm_squared(self.scenario.a, self.scenario.b, x)

        if t <= 0:
            raise VanishingOneForm(f"b^2 vanishes at x={x.tolist()}")

        res_u, res_v = deformation_ode_residual(self.triple, t)
        return self._point(
            index,
            x,
            max(abs(res_u), abs(res_v)),
            fitted={"t": t},
            components={"u": abs(res_u), "v": abs(res_v)},
        )

    def summarize(self, points):
        triple = self.triple
        grid_residual = float(
            max(
                max(abs(res) for res in deformation_ode_residual(triple, float(t)))
                for t in ODE_GRID
            )
        )
        details = {
            "grid": [float(ODE_GRID[0]), float(ODE_GRID[-1]), len(ODE_GRID)],
            "grid_residual": grid_residual,
        }
        return details, [] if grid_residual <= self.tolerance else [Verdict.FAIL]


class KropinaFamilyCheck(FactorCheck):
    """
    Everything the Kropina family construction claims: unit norm, closed and
    Douglas beta, a conformal unit-Kropina fit whose factor is the family's c,
    the profile ODE and the homothety verdict
    """

    tag = CheckTag.KROPINA_FAMILY
    description = "Full reproduction of the non-homothetic Kropina family"

    UNIT_NORM_TOLERANCE = 1e-9
    PROFILE_ODE_TOLERANCE = 1e-9
    EXACTNESS_TOLERANCE = 1e-7

    def validate(self):
        if self.scenario.family_params is None:
            raise ConfigError(
                f"Check {self.tag.value} needs a kropina_family scenario, got {self.scenario.name}"
            )

    def thresholds(self) -> Dict[str, float]:
        exact = self.EXACTNESS_TOLERANCE
        if self.cfg.scheme is Scheme.CENTRAL2:
            exact = max(exact, self.tolerance)

        return {
            "unit_norm": self.UNIT_NORM_TOLERANCE,
            "closed": exact,
            "douglas": exact,
            "fit": self.tolerance,
            "profile_ode": self.PROFILE_ODE_TOLERANCE,
        }

    def measure(self, index, x):
        scenario = self.scenario
        expected_c = scenario.expected.factor(x)

        if scenario.degenerate:
            fit = fit_conformal(
                FitModel(FitFamily.GENERIC),
                scenario.a,
                scenario.b,
                scenario.V,
                x,
                self.cfg,
                self.tolerance,
            )
            return self._point(
                index,
                x,
                fit.residual,
                fitted={"c": fit.c_hat, "c_expected": expected_c},
                components={"fit": fit.residual},
                warnings=["reduced-rank fit"] if fit.reduced_rank else [],
            )

        fit = fit_conformal(
            FitModel(FitFamily.UNIT_KROPINA),
            scenario.a,
            scenario.b,
            scenario.V,
            x,
            self.cfg,
            self.tolerance,
        )

        components = {
            "unit_norm": abs(norm_squared(scenario.a, scenario.b, x) - 1),
            "closed": closedness_residual(scenario.b, x, self.cfg),
            "douglas": douglas_kropina_residual(scenario.a, scenario.b, x, self.cfg),
            "fit": fit.residual,
            "profile_ode": profile_ode_residual(scenario.family_params, expected_c),
        }

        return self._point(
            index,
            x,
            max(components.values()),
            fitted={"c": fit.c_hat, "c_expected": expected_c},
            components=components,
        )

    def passes(self, point):
        thresholds = self.thresholds()
        return all(
            value <= thresholds[key] for key, value in point.components.items()
        )


CHECKS = {
    check.tag: check
    for check in (
        LiftIdentityCheck,
        GenericFitCheck,
        UnitKropinaFitCheck,
        ExpFitCheck,
        KropinaTypeFitCheck,
        DirectDefectCheck,
        DouglasKropinaCheck,
        KropinaClassCheck,
        ExpClassCheck,
        KillingCheck,
        EinsteinCheck,
        ClosedCheck,
        TauSigmaCheck,
        BNormFlowCheck,
        DeformationLiftCheck,
        DeformationOdeCheck,
        KropinaFamilyCheck,
    )
}


def tolerance_for(tag: CheckTag, config: RunConfig) -> float:
    """
    Explicit overrides win, defaults are raised to the floor of 2nd-order differences
    """

    for name, value in config.tolerances.items():
        if CheckTag(name) is tag:
            return float(value)

    tolerance = DEFAULT_TOLERANCES[tag]

    if config.scheme is Scheme.CENTRAL2 and tag is not CheckTag.DEFORMATION_ODE:
        tolerance = max(tolerance, CENTRAL2_TOLERANCE_FLOOR)

    return tolerance


def parse_tags(names: Sequence[str]) -> List[CheckTag]:
    """
    Check tags in order of first appearance, aliases resolved
    """

    tags = []

    for name in names:
        try:
            tag = CheckTag(name)
        except ValueError as exc:
            raise ConfigError(f"Unknown check tag: {name}") from exc

        if tag not in tags:
            tags.append(tag)

    return tags


def build_checks(config: RunConfig) -> Tuple[Scenario, List[Check]]:
    """
    Build the scenario and validated checks of a run configuration
    """

    tags = parse_tags(config.checks)

    # Tolerance overrides may only name known checks
    parse_tags(list(config.tolerances))

    scenario = scenario_from_document(config.scenario)
    cfg = DiffConfig(scheme=config.scheme)

    checks = []

    for tag in tags:
        check = CHECKS[tag](
            CheckContext(
                scenario=scenario,
                cfg=cfg,
                tolerance=tolerance_for(tag, config),
                rays=config.rays,
                seed=config.seed,
                deformation=config.deformation,
            )
        )
        check.validate()
        checks.append(check)

    return scenario, checks
