# pylint: disable=invalid-name
"""
Pointwise Riemannian computations in coordinates: jets of component maps,
Christoffel symbols, covariant derivatives, the decomposition of the covariant
derivative of a one-form and the Ricci tensor.

Index conventions follow the component arrays:
    dg[l, k, j] = d_j a_lk
    gamma[i, j, k] = Gamma^i_jk
    cov[i, j] = b_{i|j}
"""

import logging
from typing import Callable, Optional

import numpy as np

from libconformal.lib.base import DiffConfig, Jet, SmoothMap
from libconformal.lib.constants import CONFORMAL_HESSIAN_CONFIDENCE, Scheme
from libconformal.lib.exceptions import NonFiniteEvaluation, PointTooCloseToBoundary
from libconformal.lib.fields import MetricField, OneFormField, VectorFieldOnM
from libconformal.models import BetaInvariants

logger = logging.getLogger(__name__)


def central_difference(
    func: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    steps: np.ndarray,
    stencil,
) -> np.ndarray:
    """
    Partial derivatives of func at x, appended as the last axis
    """

    x = np.asarray(x, dtype=float)
    columns = []

    for i in range(x.size):
        offset = np.zeros(x.size)
        acc = 0.0

        for k, weight in stencil:
            offset[i] = k * steps[i]
            forward = np.asarray(func(x + offset), dtype=float)
            backward = np.asarray(func(x - offset), dtype=float)
            acc = acc + weight * (forward - backward)

        columns.append(acc / steps[i])

    result = np.stack(columns, axis=-1)

    if not np.all(np.isfinite(result)):
        raise NonFiniteEvaluation(f"Non-finite difference quotient at x={x.tolist()}")

    return result


def _check_reach(f: SmoothMap, x: np.ndarray, order: int, cfg: DiffConfig) -> None:
    if f.domain is None:
        return

    reach = cfg.reach(x, order)
    if not f.domain.contains(x, margin=reach):
        raise PointTooCloseToBoundary(
            f"x={x.tolist()} is within {reach:.1e} of the domain boundary"
        )


def jet(f: SmoothMap, x: np.ndarray, order: int, cfg: DiffConfig) -> Jet:
    """
    Value, first and (for order 2) second partial derivatives of f at x.

    Closed-form derivatives are used when the scheme allows it and f provides them.
    A differenced Hessian is symmetrized and its asymmetry recorded.
    """

    if order not in (1, 2):
        raise ValueError(f"Unsupported jet order: {order}")

    x = np.asarray(x, dtype=float)
    value = np.asarray(f.value(x), dtype=float)

    if not np.all(np.isfinite(value)):
        raise NonFiniteEvaluation(f"Non-finite value at x={x.tolist()}")

    analytic_gradient = f.gradient(x) if cfg.uses_analytic_jets else None

    if analytic_gradient is not None:
        gradient = np.asarray(analytic_gradient, dtype=float)
    else:
        _check_reach(f, x, 1, cfg)
        gradient = central_difference(
            f.value, x, cfg.steps(x, cfg.h_first), cfg.stencil
        )

    result = Jet(value=value, gradient=gradient, analytic=analytic_gradient is not None)

    if order == 1:
        return result

    analytic_hessian = f.hessian(x) if cfg.uses_analytic_jets else None

    if analytic_hessian is not None:
        result.hessian = np.asarray(analytic_hessian, dtype=float)
        return result

    _check_reach(f, x, 2, cfg)
    steps = cfg.steps(x, cfg.h_second)

    if analytic_gradient is not None:
        gradient_func = f.gradient
    else:

        def gradient_func(z):
            return central_difference(
                f.value, z, cfg.steps(z, cfg.h_second), cfg.stencil
            )

    raw = central_difference(gradient_func, x, steps, cfg.stencil)
    swapped = np.swapaxes(raw, -1, -2)

    result.hessian = (raw + swapped) / 2
    result.symmetry_defect = float(
        np.max(np.abs(raw - swapped)) / max(1.0, float(np.max(np.abs(raw))))
    )
    result.analytic = False

    return result


def _metric_data(a: MetricField, x: np.ndarray, cfg: DiffConfig, order: int = 1):
    g = a.at(x)
    metric_jet = jet(a.components, x, order, cfg)
    ginv = np.linalg.inv(g)
    return g, ginv, metric_jet


def _first_kind(dg: np.ndarray) -> np.ndarray:
    # first[l, j, k] = (d_j a_lk + d_k a_lj - d_l a_jk) / 2
    return 0.5 * (
        np.einsum("lkj->ljk", dg) + dg - np.einsum("jkl->ljk", dg)
    )


def christoffel(a: MetricField, x: np.ndarray, cfg: DiffConfig) -> np.ndarray:
    """
    Christoffel symbols Gamma^i_jk of the Levi-Civita connection of a at x
    """

    _, ginv, metric_jet = _metric_data(a, x, cfg)
    return np.einsum("il,ljk->ijk", ginv, _first_kind(metric_jet.gradient))


def covderiv_oneform(
    a: MetricField, b: OneFormField, x: np.ndarray, cfg: DiffConfig
) -> np.ndarray:
    """
    b_{i|j} = d_j b_i - Gamma^k_ij b_k
    """

    gamma = christoffel(a, x, cfg)
    form_jet = jet(b.components, x, 1, cfg)
    return form_jet.gradient - np.einsum("kij,k->ij", gamma, form_jet.value)


def covderiv_vector(
    a: MetricField, V: VectorFieldOnM, x: np.ndarray, cfg: DiffConfig
) -> np.ndarray:
    """
    V_{i|j} for the lowered field V_i = a_ij V^j
    """

    g, ginv, metric_jet = _metric_data(a, x, cfg)
    gamma = np.einsum("il,ljk->ijk", ginv, _first_kind(metric_jet.gradient))

    field_jet = jet(V.components, x, 1, cfg)
    lowered = g @ field_jet.value
    d_lowered = np.einsum("ikj,k->ij", metric_jet.gradient, field_jet.value) + (
        g @ field_jet.gradient
    )

    return d_lowered - np.einsum("kij,k->ij", gamma, lowered)


def norm_squared(a: MetricField, b: OneFormField, x: np.ndarray) -> float:
    """
    b^2 = a^ij b_i b_j
    """

    g = a.at(x)
    form = b.at(x)
    return float(form @ np.linalg.solve(g, form))


def beta_invariants(
    a: MetricField, b: OneFormField, x: np.ndarray, cfg: DiffConfig
) -> BetaInvariants:
    x = np.asarray(x, dtype=float)
    g = a.at(x)
    form = b.at(x)
    cov = covderiv_oneform(a, b, x, cfg)

    b_up = np.linalg.solve(g, form)
    r = (cov + cov.T) / 2
    s = (cov - cov.T) / 2

    return BetaInvariants(
        cov=cov,
        r=r,
        s=s,
        s_low=b_up @ s,
        b2=float(form @ b_up),
        b_up=b_up,
        b=form,
    )


def ricci(a: MetricField, x: np.ndarray, cfg: DiffConfig) -> np.ndarray:
    """
    Ricci tensor R_jl = d_i Gamma^i_jl - d_l Gamma^i_ji + Gamma^i_im Gamma^m_jl - Gamma^i_lm Gamma^m_ij
    """

    x = np.asarray(x, dtype=float)
    _, ginv, metric_jet = _metric_data(a, x, cfg, order=2)

    if metric_jet.symmetry_defect > CONFORMAL_HESSIAN_CONFIDENCE:
        logger.warning(
            f"Second derivatives of the metric at x={x.tolist()} are low confidence, "
            f"relative asymmetry: {metric_jet.symmetry_defect:.2e}"
        )

    dg = metric_jet.gradient
    H = metric_jet.hessian  # H[l, k, j, m] = d_m d_j a_lk

    first = _first_kind(dg)
    gamma = np.einsum("il,ljk->ijk", ginv, first)

    dginv = -np.einsum("ip,pqm,ql->ilm", ginv, dg, ginv)
    dfirst = 0.5 * (
        np.einsum("lkjm->ljkm", H) + H - np.einsum("jklm->ljkm", H)
    )
    # dgamma[i, j, k, m] = d_m Gamma^i_jk
    dgamma = np.einsum("ilm,ljk->ijkm", dginv, first) + np.einsum(
        "il,ljkm->ijkm", ginv, dfirst
    )

    ric = (
        np.einsum("ilji->jl", dgamma)
        - np.einsum("iijl->jl", dgamma)
        + np.einsum("iim,mlj->jl", gamma, gamma)
        - np.einsum("ilm,mij->jl", gamma, gamma)
    )

    return (ric + ric.T) / 2


def metric_compatibility_residual(
    a: MetricField, x: np.ndarray, cfg: DiffConfig
) -> float:
    """
    max |a_ij|k| for the Levi-Civita connection, relative to the size of a
    """

    g, ginv, metric_jet = _metric_data(a, x, cfg)
    dg = metric_jet.gradient
    gamma = np.einsum("il,ljk->ijk", ginv, _first_kind(dg))

    # a_ij|k = d_k a_ij - Gamma^l_ki a_lj - Gamma^l_kj a_il
    defect = (
        dg
        - np.einsum("lki,lj->ijk", gamma, g)
        - np.einsum("lkj,il->ijk", gamma, g)
    )

    return float(np.max(np.abs(defect)) / max(1.0, float(np.max(np.abs(g)))))


def jet_agreement(
    f: SmoothMap, x: np.ndarray, cfg: DiffConfig, order: int = 1
) -> Optional[float]:
    """
    Largest difference between closed-form and differenced partials of f at x,
    None when f has no closed-form jet of that order
    """

    analytic_cfg = DiffConfig(
        h_first=cfg.h_first, h_second=cfg.h_second, jet_tolerance=cfg.jet_tolerance
    )
    numeric_cfg = DiffConfig(
        scheme=Scheme.CENTRAL4 if cfg.uses_analytic_jets else cfg.scheme,
        h_first=cfg.h_first,
        h_second=cfg.h_second,
        jet_tolerance=cfg.jet_tolerance,
    )

    closed = jet(f, x, order, analytic_cfg)
    if not closed.analytic:
        return None

    numeric = jet(f, x, order, numeric_cfg)

    if order == 1:
        return float(np.max(np.abs(closed.gradient - numeric.gradient)))

    return float(np.max(np.abs(closed.hessian - numeric.hessian)))
