# pylint: disable=missing-docstring,invalid-name

from dataclasses import dataclass

import numpy as np


@dataclass
class BetaInvariants:
    """
    Decomposition of the covariant derivative b_{i|j} of a one-form at a point
    """

    cov: np.ndarray
    r: np.ndarray
    s: np.ndarray
    s_low: np.ndarray
    b2: float
    b_up: np.ndarray
    b: np.ndarray


@dataclass
class LieData:
    """
    S_ij = V_{i|j} + V_{j|i} and M_i = V^j b_{i|j} + b^j V_{j|i} at x, along with
    the metric and one-form components they were built from
    """

    S: np.ndarray
    M: np.ndarray
    x: np.ndarray
    metric: np.ndarray
    one_form: np.ndarray
    b2: float
