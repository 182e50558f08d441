# pylint: disable=invalid-name,too-many-arguments,too-many-locals
"""
Complete lifts of vector fields and the conformal factor fits built on
S_ij = V_{i|j} + V_{j|i} and M_i = V^j b_{i|j} + b^j V_{j|i}
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from libconformal.lib.base import DiffConfig, TangentSample
from libconformal.lib.constants import (
    CONFORMAL_ODE_TOLERANCE,
    CONFORMAL_UNIT_NORM_TOLERANCE,
    FACTOR_CONVENTIONS,
    FACTOR_SCALE_FLOOR,
    MIN_HOMOTHETY_POINTS,
    VANISHING_NORM,
    Verdict,
)
from libconformal.lib.diffgeo import (
    beta_invariants,
    central_difference,
    covderiv_vector,
    jet,
)
from libconformal.lib.exceptions import (
    DegenerateFitError,
    FitNotConformal,
    InsufficientSamples,
    OdeConditionViolated,
    PreconditionError,
    UnitNormRequired,
)
from libconformal.lib.fields import MetricField, OneFormField, VectorFieldOnM
from libconformal.lib.metrics import (
    AlphaBetaMetric,
    DeformationTriple,
    alpha_beta,
    deformation_ode_residual,
    deformed_fields,
    eval_F,
)
from libconformal.models import (
    ConformalFit,
    DeformedLift,
    DirectFit,
    FactorComparison,
    FactorField,
    Homothety,
    HomothetyReport,
    LieData,
    TauSigmaReport,
)

logger = logging.getLogger(__name__)

TangentFunction = Callable[[np.ndarray, np.ndarray], float]


def complete_lift_apply(
    V: VectorFieldOnM, f: TangentFunction, sample: TangentSample, cfg: DiffConfig
) -> float:
    """
    V^c(f) = V^i df/dx^i + y^i (dV^j/dx^i) df/dy^j at (x, y)
    """

    x, y = sample.x, sample.y
    field_jet = jet(V.components, x, 1, cfg)

    df_dx = central_difference(
        lambda z: f(z, y), x, cfg.steps(x, cfg.h_first), cfg.stencil
    )
    df_dy = central_difference(
        lambda z: f(x, z), y, cfg.steps(y, cfg.h_first), cfg.stencil
    )

    return float(field_jet.value @ df_dx + (field_jet.gradient @ y) @ df_dy)


def alpha_squared(a: MetricField) -> TangentFunction:
    return lambda x, y: float(y @ a.at(x) @ y)


def beta_function(b: OneFormField) -> TangentFunction:
    return lambda x, y: float(b.at(x) @ y)


def finsler_squared(metric: AlphaBetaMetric) -> TangentFunction:
    return lambda x, y: eval_F(metric, TangentSample(x, y)) ** 2


def lie_data(
    a: MetricField, b: OneFormField, V: VectorFieldOnM, x, cfg: DiffConfig
) -> LieData:
    x = np.asarray(x, dtype=float)
    invariants = beta_invariants(a, b, x, cfg)
    v_cov = covderiv_vector(a, V, x, cfg)
    v = V.at(x)

    return LieData(
        S=v_cov + v_cov.T,
        M=invariants.cov @ v + invariants.b_up @ v_cov,
        x=x,
        metric=a.at(x),
        one_form=invariants.b,
        b2=invariants.b2,
    )


class FitFamily(str, Enum):
    GENERIC = "generic"
    UNIT_KROPINA = "unit-kropina"
    KROPINA_TYPE = "kropina-type"
    EXP_TYPE = "exp-type"
    DIRECT = "direct"


@dataclass(frozen=True)
class FitModel:
    """
    Which pair of tensor equations a conformal factor is fitted against
    """

    family: FitFamily
    epsilon: int = 1
    m: float = -1.0
    k: float = 0.0

    @property
    def tag(self) -> str:
        if self.family is FitFamily.EXP_TYPE:
            return f"exp-type({self.epsilon:+d})"
        if self.family is FitFamily.KROPINA_TYPE:
            return f"kropina-type(k={self.k:g},m={self.m:g})"
        return self.family.value

    @property
    def has_tau(self) -> bool:
        return self.family in (FitFamily.EXP_TYPE, FitFamily.KROPINA_TYPE)

    def basis(self, g: np.ndarray, b: np.ndarray):
        """
        Coefficient tensors so that S = sum coef * S_basis and M = sum coef * M_basis,
        one entry per unknown (c, then tau)
        """

        bb = np.outer(b, b)

        if self.family in (FitFamily.GENERIC, FitFamily.UNIT_KROPINA):
            return [4 * g], [2 * b]

        if self.family is FitFamily.EXP_TYPE:
            eps = self.epsilon
            return [2 * eps * bb, 2 * g - eps * bb], [np.zeros_like(b), b]

        if self.family is FitFamily.KROPINA_TYPE:
            m, k = self.m, self.k
            return (
                [-4 * k / m * bb, 2 * g + 2 * k / m * bb],
                [2 / m * b, (1 - 1 / m) * b],
            )

        raise PreconditionError(f"{self.family.value} has no tensor model")


def fit_lie_data(model: FitModel, data: LieData, tol: float) -> ConformalFit:
    """
    Weighted least squares of S and M against the model's tensor equations
    """

    g, b = data.metric, data.one_form
    s_basis, m_basis = model.basis(g, b)

    w_S = 1.0 / np.linalg.norm(g)
    w_M = 1.0 / max(1.0, float(np.sqrt(max(data.b2, 0.0))))

    reduced = data.b2 <= VANISHING_NORM

    rows = [np.column_stack([w_S * t.ravel() for t in s_basis])]
    rhs = [w_S * data.S.ravel()]

    if not reduced:
        rows.append(np.column_stack([w_M * t for t in m_basis]))
        rhs.append(w_M * data.M)

    design = np.vstack(rows)
    target = np.concatenate(rhs)

    solution, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)

    if rank == 0:
        raise DegenerateFitError(
            f"No usable equation for the {model.tag} fit at x={data.x.tolist()}"
        )

    if rank < len(s_basis):
        reduced = True
        logger.warning(
            f"Reduced-rank {model.tag} fit at x={data.x.tolist()}, beta vanishes"
        )

    model_S = sum(coef * t for coef, t in zip(solution, s_basis))
    model_M = sum(coef * t for coef, t in zip(solution, m_basis))

    residual_S = float(np.linalg.norm(data.S - model_S) * w_S)
    residual_M = 0.0 if data.b2 <= VANISHING_NORM else float(
        np.linalg.norm(data.M - model_M) * w_M
    )

    return ConformalFit(
        family=model.tag,
        c_hat=float(solution[0]),
        tau_hat=float(solution[1]) if model.has_tau else None,
        residual_S=residual_S,
        residual_M=residual_M,
        conformal=max(residual_S, residual_M) <= tol,
        reduced_rank=reduced,
        x=tuple(float(v) for v in data.x),
    )


def fit_conformal(
    model: FitModel,
    a: MetricField,
    b: OneFormField,
    V: VectorFieldOnM,
    x,
    cfg: DiffConfig,
    tol: float,
) -> ConformalFit:
    """
    Fit the conformal factor c (and tau for the two-parameter models) at x
    """

    if model.family is FitFamily.KROPINA_TYPE and model.m in (0, 1):
        raise PreconditionError(f"m-Kropina exponent must not be 0 or 1, got {model.m}")

    if model.family is FitFamily.DIRECT:
        raise PreconditionError("Use direct_defect for the ray-sampled fit")

    data = lie_data(a, b, V, x, cfg)

    if (
        model.family is FitFamily.UNIT_KROPINA
        and abs(data.b2 - 1) > CONFORMAL_UNIT_NORM_TOLERANCE
    ):
        raise UnitNormRequired(
            f"||beta||_alpha^2 = {data.b2:.6g} at x={data.x.tolist()}, "
            "normalize the pair with kropina_normalize first"
        )

    return fit_lie_data(model, data, tol)


def direct_defect(
    metric: AlphaBetaMetric,
    V: VectorFieldOnM,
    x,
    rays: Sequence[np.ndarray],
    cfg: DiffConfig,
) -> DirectFit:
    """
    Fit c in V^c(F^2) = 4 c F^2 over rays at one base point, by brute force
    differentiation of F^2. Valid for any phi.
    """

    x = np.asarray(x, dtype=float)

    if len(rays) < x.size + 1:
        raise InsufficientSamples(
            f"{len(rays)} rays at x={x.tolist()}, at least {x.size + 1} required"
        )

    f2 = finsler_squared(metric)
    lifts, targets = [], []

    for y in rays:
        sample = TangentSample(x, y)
        lifts.append(complete_lift_apply(V, f2, sample, cfg))
        targets.append(4 * f2(x, sample.y))

    lifts, targets = np.array(lifts), np.array(targets)
    c_hat = float(lifts @ targets / (targets @ targets))
    defect = float(np.linalg.norm(lifts - c_hat * targets) / np.linalg.norm(targets))

    return DirectFit(
        c_hat=c_hat, defect=defect, rays=len(rays), x=tuple(float(v) for v in x)
    )


def lift_identity_residuals(
    metric: AlphaBetaMetric, V: VectorFieldOnM, sample: TangentSample, cfg: DiffConfig
) -> dict:
    """
    Compare brute-force complete lifts of alpha^2, beta and F^2 with their
    expressions through S, M and phi
    """

    data = lie_data(metric.alpha, metric.beta, V, sample.x, cfg)
    y = sample.y

    lift_a2 = complete_lift_apply(V, alpha_squared(metric.alpha), sample, cfg)
    lift_b = complete_lift_apply(V, beta_function(metric.beta), sample, cfg)

    residuals = {
        "alpha": abs(lift_a2 - y @ data.S @ y) / max(1.0, abs(lift_a2)),
        "beta": abs(lift_b - data.M @ y) / max(1.0, abs(lift_b)),
    }

    residuals["profile"] = profile_lift_residual(metric, V, sample, cfg, data)

    return {key: float(value) for key, value in residuals.items()}


def profile_lift_residual(
    metric: AlphaBetaMetric,
    V: VectorFieldOnM,
    sample: TangentSample,
    cfg: DiffConfig,
    data: Optional[LieData] = None,
) -> float:
    """
    Residual of V^c(F^2) = phi (phi - s phi') V^c(alpha^2) + 2 alpha phi phi' V^c(beta)
    """

    data = data or lie_data(metric.alpha, metric.beta, V, sample.x, cfg)
    alpha, beta = alpha_beta(metric, sample)
    s = beta / alpha
    phi, dphi = metric.phi.phi(s), metric.phi.dphi(s)

    y = sample.y
    predicted = phi * (phi - s * dphi) * (y @ data.S @ y) + 2 * alpha * phi * dphi * (
        data.M @ y
    )

    brute = complete_lift_apply(V, finsler_squared(metric), sample, cfg)

    return float(abs(brute - predicted) / max(1.0, abs(brute)))


def factor_field(fits: Sequence[ConformalFit]) -> FactorField:
    positive = [fit for fit in fits if fit.conformal]
    return FactorField(
        points=[fit.x for fit in positive], values=[fit.c_hat for fit in positive]
    )


def homothety_test(field: FactorField, tol: float) -> HomothetyReport:
    """
    Homothetic when the fitted factor is constant over the sample, Killing when it also vanishes
    """

    if field.count < MIN_HOMOTHETY_POINTS:
        return HomothetyReport(
            verdict=Homothety.INCONCLUSIVE,
            killing=False,
            mean=field.mean,
            spread=field.spread,
            gradient_estimate=0.0,
            count=field.count,
        )

    points = np.array(field.points)
    values = np.array(field.values)

    # Largest difference quotient over all pairs of points
    distances = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    jumps = np.abs(values[:, None] - values[None, :])
    mask = distances > 0
    gradient_estimate = (
        float(np.max(jumps[mask] / distances[mask])) if mask.any() else 0.0
    )

    mean, spread = field.mean, field.spread
    homothetic = spread <= tol * max(1.0, abs(mean))

    return HomothetyReport(
        verdict=Homothety.HOMOTHETIC if homothetic else Homothety.NON_HOMOTHETIC,
        killing=homothetic and abs(mean) <= tol,
        mean=mean,
        spread=spread,
        gradient_estimate=gradient_estimate,
        count=field.count,
    )


def tau_sigma_test(
    a: MetricField,
    b: OneFormField,
    V: VectorFieldOnM,
    points: Sequence[np.ndarray],
    cfg: DiffConfig,
    tol: float,
) -> TauSigmaReport:
    """
    Fit S = sigma a, M = tau b and r = rho a at every point. When all three
    hold the difference tau - sigma must be constant over the points.
    """

    sigma_res, tau_res, rho_res, differences = [], [], [], []

    for x in points:
        data = lie_data(a, b, V, x, cfg)
        invariants = beta_invariants(a, b, x, cfg)
        g, form = data.metric, data.one_form
        g_norm = np.linalg.norm(g)

        sigma = float(np.sum(data.S * g) / np.sum(g * g))
        sigma_res.append(float(np.linalg.norm(data.S - sigma * g) / g_norm))

        if data.b2 > VANISHING_NORM:
            tau = float(data.M @ form / (form @ form))
            tau_res.append(
                float(
                    np.linalg.norm(data.M - tau * form)
                    / max(1.0, np.sqrt(data.b2))
                )
            )
        else:
            tau = 0.0
            tau_res.append(float(np.linalg.norm(data.M)))

        rho = float(np.sum(invariants.r * g) / np.sum(g * g))
        rho_res.append(float(np.linalg.norm(invariants.r - rho * g) / g_norm))

        differences.append(tau - sigma)

    report = TauSigmaReport(
        sigma_residual=max(sigma_res, default=0.0),
        tau_residual=max(tau_res, default=0.0),
        beta_conformal_residual=max(rho_res, default=0.0),
        differences=differences,
        hypotheses_hold=max(sigma_res + tau_res + rho_res, default=0.0) <= tol,
    )

    if report.hypotheses_hold and differences:
        report.spread = float(max(differences) - min(differences))
        mean = sum(differences) / len(differences)
        report.constant = report.spread <= tol * max(1.0, abs(mean))

    return report


def _exp_fit(a, b, V, x, epsilon, cfg, tol) -> ConformalFit:
    fit = fit_conformal(
        FitModel(FitFamily.EXP_TYPE, epsilon=epsilon), a, b, V, x, cfg, tol
    )
    if not fit.conformal:
        raise FitNotConformal(
            f"V is not conformal for the exponential type at x={np.asarray(x).tolist()}, "
            f"residual: {fit.residual:.3e}"
        )
    return fit


def lift_b_norm_check(
    a: MetricField,
    b: OneFormField,
    V: VectorFieldOnM,
    x,
    epsilon: int,
    cfg: DiffConfig,
    tol: float,
) -> float:
    """
    Residual of V^c(b^2) = epsilon (tau - 2c) b^4 for a field conformal to the
    exponential type metric
    """

    fit = _exp_fit(a, b, V, x, epsilon, cfg, tol)
    invariants = beta_invariants(a, b, x, cfg)

    # d_j b^2 = 2 b^i b_{i|j}
    lift = float(2 * invariants.b_up @ invariants.cov @ V.at(x))
    b4 = invariants.b2**2
    predicted = epsilon * (fit.tau_hat - 2 * fit.c_hat) * b4

    return float(abs(lift - predicted) / max(1.0, b4))


def deformed_lift_check(
    a: MetricField,
    b: OneFormField,
    V: VectorFieldOnM,
    triple: DeformationTriple,
    x,
    rays: Sequence[np.ndarray],
    cfg: DiffConfig,
    tol: float,
) -> DeformedLift:
    """
    Compare lifts of the deformed pair with their predictions:
        V^c(alpha~^2) = [(tau + 2c) + epsilon (tau - 2c) t^2 w'/w] alpha~^2
        V^c(beta~) = (w tau + epsilon (tau - 2c) t^2 w') beta
    with t = b^2, and for the special solution V^c(beta~) = 2 (tau - c) beta~ as well
    """

    x = np.asarray(x, dtype=float)
    fit = _exp_fit(a, b, V, x, triple.epsilon, cfg, tol)
    invariants = beta_invariants(a, b, x, cfg)
    t = invariants.b2

    res_u, res_v = deformation_ode_residual(triple, t)
    if max(abs(res_u), abs(res_v)) > CONFORMAL_ODE_TOLERANCE:
        raise OdeConditionViolated(
            f"Deformation triple misses the ODE at t={t:.6g}, residuals ({res_u:.3e}, {res_v:.3e})"
        )

    tau, c, eps = fit.tau_hat, fit.c_hat, triple.epsilon
    w, dw = triple.w(t), triple.w.derivative(t)

    a_tilde, b_tilde = deformed_fields(a, b, triple)
    alpha_factor = (tau + 2 * c) + eps * (tau - 2 * c) * t**2 * dw / w
    beta_factor = w * tau + eps * (tau - 2 * c) * t**2 * dw

    alpha_res, beta_res, special_res = [], [], []

    for y in rays:
        sample = TangentSample(x, y)
        a2 = alpha_squared(a_tilde)(x, sample.y)
        beta = float(invariants.b @ sample.y)
        beta_t = beta_function(b_tilde)(x, sample.y)

        lift_a2 = complete_lift_apply(V, alpha_squared(a_tilde), sample, cfg)
        lift_b = complete_lift_apply(V, beta_function(b_tilde), sample, cfg)

        alpha_res.append(abs(lift_a2 - alpha_factor * a2) / max(1.0, abs(lift_a2)))
        beta_res.append(abs(lift_b - beta_factor * beta) / max(1.0, abs(lift_b)))

        if triple.special:
            special_res.append(
                max(
                    abs(lift_b - 2 * (tau - c) * beta_t),
                    abs(lift_a2 - 2 * tau * a2),
                )
                / max(1.0, abs(lift_b), abs(lift_a2))
            )

    return DeformedLift(
        alpha_residual=float(max(alpha_res)),
        beta_residual=float(max(beta_res)),
        special_residual=float(max(special_res)) if special_res else None,
    )


def compare_factor(
    fitted: Sequence[float],
    expected: Sequence[float],
    tol: float,
    convention: float = 1.0,
) -> FactorComparison:
    """
    Find the ratio kappa among the usual conformal factor conventions that best
    maps the expected factors onto the fitted ones, relative to the expected
    factors.

    A kappa equal to the declared convention passes, one of the opposite sign
    fails, and any other matching kappa only warns.
    """

    fitted = np.asarray(fitted, dtype=float)
    expected = np.asarray(expected, dtype=float)

    if fitted.size == 0:
        raise InsufficientSamples("No fitted factors to compare")

    # Ties go to the declared convention
    candidates = (convention,) + tuple(
        kappa for kappa in FACTOR_CONVENTIONS if kappa != convention
    )
    scale = np.maximum(np.abs(expected), FACTOR_SCALE_FLOOR)
    errors = [
        float(np.max(np.abs(fitted - kappa * expected) / scale))
        for kappa in candidates
    ]
    best = int(np.argmin(errors))
    kappa = candidates[best]
    matched = errors[best] <= tol

    if not matched or kappa * convention < 0:
        verdict = Verdict.FAIL
    elif kappa != convention:
        verdict = Verdict.WARN
    else:
        verdict = Verdict.PASS

    if matched and kappa != convention:
        logger.warning(
            f"Fitted conformal factor equals {kappa:g} times the expected one, "
            f"declared convention is {convention:g}"
        )

    return FactorComparison(
        kappa=kappa,
        max_error=errors[best],
        matched=matched,
        convention=convention,
        verdict=verdict.value,
    )

