# pylint: disable=invalid-name
"""
Pointwise residuals of the Douglas, Landsberg, Killing and Einstein conditions
"""

import logging

import numpy as np

from libconformal.lib.base import DiffConfig
from libconformal.lib.constants import VANISHING_NORM
from libconformal.lib.diffgeo import beta_invariants, jet, ricci
from libconformal.lib.exceptions import PreconditionError, VanishingOneForm
from libconformal.lib.fields import MetricField, OneFormField
from libconformal.models import BetaInvariants, ClassReport

logger = logging.getLogger(__name__)


def _project(target: np.ndarray, basis: np.ndarray):
    """
    Least squares coefficient of target along basis, with the normalized remainder
    """

    denominator = float(np.sum(basis * basis))
    coef = float(np.sum(target * basis) / denominator) if denominator > 0 else 0.0
    return coef, target - coef * basis


def _nonvanishing(invariants: BetaInvariants, x) -> None:
    if invariants.b2 <= VANISHING_NORM:
        raise VanishingOneForm(
            f"||beta||_alpha vanishes at x={np.asarray(x).tolist()}"
        )


def closedness_residual(b: OneFormField, x, cfg: DiffConfig) -> float:
    """
    max |d_i b_j - d_j b_i|
    """

    db = jet(b.components, np.asarray(x, dtype=float), 1, cfg).gradient
    return float(np.max(np.abs(db - db.T)))


def _douglas_defect(invariants: BetaInvariants) -> float:
    b, s_low = invariants.b, invariants.s_low
    target = (np.outer(b, s_low) - np.outer(s_low, b)) / invariants.b2
    return float(np.max(np.abs(invariants.s - target)) / np.sqrt(invariants.b2))


def douglas_kropina_residual(
    a: MetricField, b: OneFormField, x, cfg: DiffConfig
) -> float:
    """
    Defect of s_ij = (b_i s_j - b_j s_i) / b^2, divided by ||beta||_alpha
    so that it does not change under b -> kappa b
    """

    invariants = beta_invariants(a, b, x, cfg)
    _nonvanishing(invariants, x)
    return _douglas_defect(invariants)


def mkropina_class_residual(
    a: MetricField,
    b: OneFormField,
    m: float,
    x,
    cfg: DiffConfig,
    tol: float = 1e-6,
    landsberg: bool = False,
) -> ClassReport:
    """
    Fit tau in
        r_ij = 2 tau (m b^2 a_ij - (m+1) b_i b_j) - (m+1)/((m-1) b^2) (b_i s_j + b_j s_i)
    and combine its residual with the s-equation of the Douglas condition.

    The Douglas reading excludes m = -1, the Landsberg reading (n >= 3) allows it.
    """

    if m in (0, 1):
        raise PreconditionError(f"m must not be 0 or 1, got {m}")

    if m == -1 and not landsberg:
        raise PreconditionError("m = -1 is excluded from the Douglas condition")

    if landsberg and a.dim < 3:
        raise PreconditionError("The Landsberg condition needs dimension 3 or more")

    invariants = beta_invariants(a, b, x, cfg)
    _nonvanishing(invariants, x)

    g = a.at(x)
    bb = np.outer(invariants.b, invariants.b)
    bs = np.outer(invariants.b, invariants.s_low) + np.outer(
        invariants.s_low, invariants.b
    )

    target = invariants.r + (m + 1) / ((m - 1) * invariants.b2) * bs
    basis = 2 * (m * invariants.b2 * g - (m + 1) * bb)

    tau, remainder = _project(target, basis)
    r_residual = float(np.linalg.norm(remainder) / np.linalg.norm(g))
    s_residual = _douglas_defect(invariants)
    residual = max(r_residual, s_residual)

    return ClassReport(
        condition="landsberg" if landsberg else "douglas",
        fitted={"tau": tau},
        residual=residual,
        holds=residual <= tol,
        components={"r": r_residual, "s": s_residual},
    )


def exp_class_residual(
    a: MetricField, b: OneFormField, epsilon: int, x, cfg: DiffConfig, tol: float = 1e-6
) -> ClassReport:
    """
    Fit sigma in
        r_ij = sigma ((epsilon b^2 / 2 - 1) b_i b_j + b^2 a_ij) + (epsilon - 1/b^2)(b_i s_j + b_j s_i)
    together with the s-equation of the Douglas condition
    """

    invariants = beta_invariants(a, b, x, cfg)
    _nonvanishing(invariants, x)

    g = a.at(x)
    b2 = invariants.b2
    bb = np.outer(invariants.b, invariants.b)
    bs = np.outer(invariants.b, invariants.s_low) + np.outer(
        invariants.s_low, invariants.b
    )

    target = invariants.r - (epsilon - 1 / b2) * bs
    basis = (epsilon * b2 / 2 - 1) * bb + b2 * g

    sigma, remainder = _project(target, basis)
    r_residual = float(np.linalg.norm(remainder) / np.linalg.norm(g))
    s_residual = _douglas_defect(invariants)
    residual = max(r_residual, s_residual)

    return ClassReport(
        condition=f"exp({epsilon:+d})",
        fitted={"sigma": sigma},
        residual=residual,
        holds=residual <= tol,
        components={"r": r_residual, "s": s_residual},
    )


def killing_residual(a: MetricField, b: OneFormField, x, cfg: DiffConfig) -> float:
    """
    ||r||_F / ||a||_F
    """

    invariants = beta_invariants(a, b, x, cfg)
    return float(np.linalg.norm(invariants.r) / np.linalg.norm(a.at(x)))


def scalar_curvature(a: MetricField, x, cfg: DiffConfig) -> float:
    g = a.at(x)
    return float(np.sum(np.linalg.inv(g) * ricci(a, x, cfg)))


def einstein_residual(a: MetricField, x, cfg: DiffConfig) -> float:
    """
    ||Ric - (R/n) a||_F / ||a||_F, identically zero in dimension 2
    """

    g = a.at(x)
    n = a.dim
    ric = ricci(a, x, cfg)
    scalar = float(np.sum(np.linalg.inv(g) * ric))

    if n == 2:
        logger.debug(
            f"Dimension 2, scalar curvature at x={np.asarray(x).tolist()}: {scalar:.6g}"
        )

    return float(np.linalg.norm(ric - scalar / n * g) / np.linalg.norm(g))
