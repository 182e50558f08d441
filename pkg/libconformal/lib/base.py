# pylint: disable=missing-docstring,invalid-name

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from libconformal.lib.constants import (
    CONFORMAL_H_FIRST,
    CONFORMAL_H_SECOND,
    CONFORMAL_JET_TOLERANCE,
    Scheme,
)
from libconformal.lib.exceptions import ConfigError

# Central difference stencils as (offset, weight) pairs, derivative = sum w * (f(x+kh) - f(x-kh)) / h
STENCILS = {
    Scheme.CENTRAL2: ((1, 0.5),),
    Scheme.CENTRAL4: ((1, 2.0 / 3.0), (2, -1.0 / 12.0)),
}


@dataclass(frozen=True)
class DomainBox:
    """
    Open coordinate box standing in for a chart of the manifold
    """

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ConfigError("Domain bounds must have the same length")

        if len(self.lower) < 2:
            raise ConfigError("Domain dimension must be at least 2")

        if any(lo >= up for lo, up in zip(self.lower, self.upper)):
            raise ConfigError(f"Empty domain box {self.lower} x {self.upper}")

    @classmethod
    def cube(cls, dim: int, half_width: float) -> "DomainBox":
        return cls(lower=(-half_width,) * dim, upper=(half_width,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def distance_to_boundary(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(
            min(np.min(x - np.array(self.lower)), np.min(np.array(self.upper) - x))
        )

    def contains(self, x: np.ndarray, margin: float = 0.0) -> bool:
        return self.distance_to_boundary(x) > margin

    def shrink(self, factor: float) -> "DomainBox":
        center = (np.array(self.lower) + np.array(self.upper)) / 2
        half = (np.array(self.upper) - np.array(self.lower)) / 2 * factor
        return DomainBox(
            lower=tuple(float(v) for v in center - half),
            upper=tuple(float(v) for v in center + half),
        )


@dataclass(frozen=True)
class DiffConfig:
    """
    Differentiation settings shared by every pointwise computation
    """

    scheme: Scheme = Scheme.ANALYTIC
    h_first: float = CONFORMAL_H_FIRST
    h_second: float = CONFORMAL_H_SECOND
    jet_tolerance: float = CONFORMAL_JET_TOLERANCE

    def __post_init__(self):
        if self.h_first <= 0 or self.h_second <= 0:
            raise ConfigError("Difference steps must be positive")

        if self.h_second < self.h_first:
            raise ConfigError(
                "Second-derivative step must not be smaller than first-derivative step"
            )

    @property
    def stencil(self) -> Tuple[Tuple[int, float], ...]:
        # Analytic mode falls back to 4th-order differences where no jet exists
        return STENCILS.get(self.scheme, STENCILS[Scheme.CENTRAL4])

    @property
    def uses_analytic_jets(self) -> bool:
        return self.scheme is Scheme.ANALYTIC

    def steps(self, x: np.ndarray, h0: float) -> np.ndarray:
        return h0 * np.maximum(1.0, np.abs(x))

    def reach(self, x: np.ndarray, order: int) -> float:
        """
        Largest coordinate offset a jet of the given order evaluates at
        """
        k = max(offset for offset, _ in self.stencil)
        if order > 1:
            # Hessians difference a differenced gradient, both with the second step
            h = 2 * self.steps(x, self.h_second)
        else:
            h = self.steps(x, self.h_first)
        return float(k * np.max(h))


class SmoothMap(ABC):
    """
    Smooth map from a coordinate box of R^n to arrays of a fixed shape.

    Derivative axes are appended last, so gradient(x)[..., j] is the partial
    derivative along x^j and hessian(x)[..., j, k] the second partial along x^j, x^k.
    Subclasses that know their derivatives in closed form override gradient and
    hessian, otherwise these return None and callers difference the values.
    """

    def __init__(
        self, dim: int, shape: Sequence[int], domain: Optional[DomainBox] = None
    ):
        self.dim = dim
        self.shape = tuple(shape)
        self.domain = domain

    @abstractmethod
    def value(self, x: np.ndarray) -> np.ndarray:
        """
        Components at x
        """

    def gradient(self, x: np.ndarray) -> Optional[np.ndarray]:
        return None

    def hessian(self, x: np.ndarray) -> Optional[np.ndarray]:
        return None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.value(x)


@dataclass(frozen=True)
class TangentSample:
    """
    A point x of the chart and a nonzero tangent vector y at x
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))

        if not np.any(self.y):
            raise ValueError("Tangent vector must be nonzero")


@dataclass
class Jet:
    """
    Value and partial derivatives of a SmoothMap at a point
    """

    value: np.ndarray
    gradient: np.ndarray
    hessian: Optional[np.ndarray] = None
    analytic: bool = False
    # Max asymmetry of a differenced Hessian relative to its size
    symmetry_defect: float = 0.0
