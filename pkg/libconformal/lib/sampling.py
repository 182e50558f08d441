# pylint: disable=invalid-name
"""
Seeded sample points and admissible tangent rays
"""

import logging
import math
from typing import List

import numpy as np

from libconformal.lib.base import DiffConfig, DomainBox, TangentSample
from libconformal.lib.constants import CONFORMAL_SAMPLE_RETRIES
from libconformal.lib.exceptions import ConformalException, SamplingError
from libconformal.lib.metrics import AlphaBetaMetric, alpha_beta, finsler_value

logger = logging.getLogger(__name__)


def boundary_margin(domain: DomainBox, cfg: DiffConfig) -> float:
    """
    Keep every difference stencil of a second-order jet inside the box
    """

    scale = max(
        1.0,
        float(np.max(np.abs(domain.lower))),
        float(np.max(np.abs(domain.upper))),
    )
    return 5 * cfg.h_second * scale


def sample_points(
    domain: DomainBox, count: int, seed: int, cfg: DiffConfig
) -> np.ndarray:
    """
    count points uniform in the box shrunk by the stencil margin
    """

    margin = boundary_margin(domain, cfg)
    lower = np.array(domain.lower) + margin
    upper = np.array(domain.upper) - margin

    if np.any(lower >= upper):
        raise SamplingError(f"Box {domain} is too small for a margin of {margin:.3e}")

    rng = np.random.default_rng(seed)
    points = rng.uniform(lower, upper, size=(count, domain.dim))

    logger.debug(f"Drew {count} points with seed {seed}, margin {margin:.3e}")

    return points


def _admitted(metric: AlphaBetaMetric, x: np.ndarray, y: np.ndarray) -> bool:
    try:
        alpha, beta = alpha_beta(metric, TangentSample(x, y))
        s = beta / alpha
        if abs(s) < metric.phi.min_abs_s:
            return False
        value = finsler_value(metric.phi, alpha, beta)
    except ConformalException:
        return False

    return math.isfinite(value) and value > 0


def sample_rays(
    metric: AlphaBetaMetric, x, count: int, seed: int, index: int
) -> List[np.ndarray]:
    """
    count unit directions at x, uniform on the sphere and rejected against the
    metric's singular-domain rule. The stream depends only on (seed, index).
    """

    x = np.asarray(x, dtype=float)
    rng = np.random.default_rng([seed, index])
    rays = []

    for _ in range(count):
        for _ in range(CONFORMAL_SAMPLE_RETRIES):
            y = rng.normal(size=x.size)
            norm = np.linalg.norm(y)
            if norm == 0:
                continue
            y = y / norm
            if _admitted(metric, x, y):
                rays.append(y)
                break
        else:
            raise SamplingError(
                f"No admissible ray at x={x.tolist()} after {CONFORMAL_SAMPLE_RETRIES} draws"
            )

    return rays
