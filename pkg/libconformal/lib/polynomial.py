# pylint: disable=invalid-name
"""
Polynomial and rational component functions with closed-form jets, parsed from
the coefficient tables of inline scenario definitions
"""

from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np

from libconformal.lib.base import DomainBox, SmoothMap
from libconformal.lib.exceptions import ConfigError


class Polynomial:
    """
    sum_t coef_t * prod_i x_i ** power_t[i]
    """

    def __init__(self, terms: Sequence[Tuple[float, Sequence[int]]], dim: int):
        self.dim = dim

        if terms:
            self.coefs = np.array([float(coef) for coef, _ in terms])
            self.powers = np.array([list(powers) for _, powers in terms], dtype=int)
        else:
            self.coefs = np.zeros(0)
            self.powers = np.zeros((0, dim), dtype=int)

        if self.powers.shape[1] != dim:
            raise ConfigError(f"Polynomial terms must have {dim} exponents")

        if np.any(self.powers < 0):
            raise ConfigError("Polynomial exponents must be non-negative")

    @classmethod
    def constant(cls, value: float, dim: int) -> "Polynomial":
        return cls([(value, [0] * dim)], dim)

    def _monomials(self, x: np.ndarray, powers: np.ndarray) -> np.ndarray:
        return np.prod(np.power(x[None, :], powers), axis=1)

    def value(self, x: np.ndarray) -> float:
        return float(self.coefs @ self._monomials(x, self.powers))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        grad = np.zeros(self.dim)
        for j in range(self.dim):
            factor = self.coefs * self.powers[:, j]
            lowered = self.powers.copy()
            lowered[:, j] = np.maximum(lowered[:, j] - 1, 0)
            grad[j] = factor @ self._monomials(x, lowered)
        return grad

    def hessian(self, x: np.ndarray) -> np.ndarray:
        hess = np.zeros((self.dim, self.dim))
        for j in range(self.dim):
            for k in range(self.dim):
                lowered = self.powers.copy()
                factor = self.coefs * lowered[:, j]
                lowered[:, j] = np.maximum(lowered[:, j] - 1, 0)
                factor = factor * lowered[:, k]
                lowered[:, k] = np.maximum(lowered[:, k] - 1, 0)
                hess[j, k] = factor @ self._monomials(x, lowered)
        return hess


class Rational:
    """
    numerator / denominator
    """

    def __init__(self, numerator: Polynomial, denominator: Polynomial):
        self.numerator = numerator
        self.denominator = denominator
        self.dim = numerator.dim

    def value(self, x):
        return self.numerator.value(x) / self.denominator.value(x)

    def gradient(self, x):
        q = self.value(x)
        return (self.numerator.gradient(x) - q * self.denominator.gradient(x)) / (
            self.denominator.value(x)
        )

    def hessian(self, x):
        # N = q D differentiated twice
        d = self.denominator.value(x)
        q = self.value(x)
        dq = self.gradient(x)
        dd = self.denominator.gradient(x)
        return (
            self.numerator.hessian(x)
            - np.outer(dq, dd)
            - np.outer(dd, dq)
            - q * self.denominator.hessian(x)
        ) / d


Component = Union[Polynomial, Rational]


def parse_component(entry: Any, dim: int) -> Component:
    """
    A number, {"terms": [[coef, [p1, ..., pn]], ...]} or
    {"numerator": {...}, "denominator": {...}}
    """

    if isinstance(entry, (int, float)):
        return Polynomial.constant(float(entry), dim)

    if isinstance(entry, dict) and "terms" in entry:
        return Polynomial([(coef, powers) for coef, powers in entry["terms"]], dim)

    if isinstance(entry, dict) and "numerator" in entry:
        return Rational(
            parse_component(entry["numerator"], dim),
            parse_component(entry["denominator"], dim),
        )

    raise ConfigError(f"Unable to parse component: {entry!r}")


class ComponentMap(SmoothMap):
    """
    Array of polynomial or rational components
    """

    def __init__(
        self, components: np.ndarray, dim: int, domain: Optional[DomainBox] = None
    ):
        self.components = components
        super().__init__(dim, components.shape, domain=domain)

    @classmethod
    def parse(
        cls, table: List, dim: int, domain: Optional[DomainBox] = None
    ) -> "ComponentMap":
        parsed = np.empty(np.shape(np.array(table, dtype=object)), dtype=object)
        flat = parsed.reshape(-1)

        for i, entry in enumerate(np.array(table, dtype=object).reshape(-1)):
            flat[i] = parse_component(entry, dim)

        return cls(parsed, dim, domain=domain)

    def _collect(self, method: str, x, extra_shape: Tuple[int, ...]) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(self.shape + extra_shape)
        for index in np.ndindex(*self.shape):
            out[index] = getattr(self.components[index], method)(x)
        return out

    def value(self, x):
        return self._collect("value", x, ())

    def gradient(self, x):
        return self._collect("gradient", x, (self.dim,))

    def hessian(self, x):
        return self._collect("hessian", x, (self.dim, self.dim))
