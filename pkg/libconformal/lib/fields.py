# pylint: disable=missing-docstring,invalid-name
"""
Tensor fields on a coordinate box and a few generic component maps
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from libconformal.lib.base import DomainBox, SmoothMap
from libconformal.lib.exceptions import MetricNotPositiveDefinite, NonFiniteEvaluation


def _finite(values: np.ndarray, what: str, x: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NonFiniteEvaluation(f"{what} is not finite at x={x.tolist()}")
    return values


@dataclass(frozen=True)
class MetricField:
    """
    Riemannian metric a_ij(x)
    """

    components: SmoothMap

    def __post_init__(self):
        n = self.components.dim
        if self.components.shape != (n, n):
            raise ValueError(f"Metric components must have shape ({n}, {n})")

    @property
    def dim(self) -> int:
        return self.components.dim

    def at(self, x: np.ndarray) -> np.ndarray:
        """
        Components at x, checked for symmetry and positive definiteness
        """
        x = np.asarray(x, dtype=float)
        g = _finite(np.asarray(self.components.value(x), dtype=float), "Metric", x)

        if not np.allclose(g, g.T, rtol=1e-12, atol=1e-14):
            raise MetricNotPositiveDefinite(
                f"Metric is not symmetric at x={x.tolist()}"
            )

        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError as exc:
            raise MetricNotPositiveDefinite(
                f"Metric is not positive definite at x={x.tolist()}"
            ) from exc

        return g


@dataclass(frozen=True)
class OneFormField:
    """
    One-form b_i(x)
    """

    components: SmoothMap

    @property
    def dim(self) -> int:
        return self.components.dim

    def at(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return _finite(np.asarray(self.components.value(x), dtype=float), "One-form", x)


@dataclass(frozen=True)
class VectorFieldOnM:
    """
    Vector field V^i(x)
    """

    components: SmoothMap

    @property
    def dim(self) -> int:
        return self.components.dim

    def at(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return _finite(
            np.asarray(self.components.value(x), dtype=float), "Vector field", x
        )


class ConstantMap(SmoothMap):
    def __init__(self, constant, domain: Optional[DomainBox] = None, dim=None):
        self.constant = np.array(constant, dtype=float)
        super().__init__(
            dim or self.constant.shape[0], self.constant.shape, domain=domain
        )

    def value(self, x):
        return self.constant.copy()

    def gradient(self, x):
        return np.zeros(self.shape + (self.dim,))

    def hessian(self, x):
        return np.zeros(self.shape + (self.dim, self.dim))


class AffineMap(SmoothMap):
    """
    x -> A x + offset
    """

    def __init__(self, matrix, offset=None, domain: Optional[DomainBox] = None):
        self.matrix = np.array(matrix, dtype=float)
        n = self.matrix.shape[1]
        self.offset = (
            np.zeros(self.matrix.shape[0])
            if offset is None
            else np.array(offset, dtype=float)
        )
        super().__init__(n, (self.matrix.shape[0],), domain=domain)

    def value(self, x):
        return self.matrix @ np.asarray(x, dtype=float) + self.offset

    def gradient(self, x):
        return self.matrix.copy()

    def hessian(self, x):
        return np.zeros(self.shape + (self.dim, self.dim))


class FunctionMap(SmoothMap):
    """
    Component map built from callables, derivatives optional
    """

    def __init__(
        self,
        dim: int,
        shape,
        value: Callable[[np.ndarray], np.ndarray],
        gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        domain: Optional[DomainBox] = None,
    ):
        super().__init__(dim, shape, domain=domain)
        self._value = value
        self._gradient = gradient
        self._hessian = hessian

    def value(self, x):
        return np.asarray(self._value(np.asarray(x, dtype=float)), dtype=float)

    def gradient(self, x):
        if self._gradient is None:
            return None
        return np.asarray(self._gradient(np.asarray(x, dtype=float)), dtype=float)

    def hessian(self, x):
        if self._hessian is None:
            return None
        return np.asarray(self._hessian(np.asarray(x, dtype=float)), dtype=float)
