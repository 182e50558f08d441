# pylint: disable=invalid-name,too-many-instance-attributes,too-many-arguments,too-many-locals
"""
Scenarios: a metric, a one-form, a vector field and a phi family on a box,
with the values the checks are expected to find.

The builtin scenarios and the non-homothetic Kropina family all come with
closed-form jets.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

import numpy as np

from libconformal.lib.base import DomainBox, SmoothMap
from libconformal.lib.constants import VANISHING_NORM
from libconformal.lib.exceptions import (
    ConfigError,
    ConstraintViolation,
    DomainViolation,
    PreconditionError,
)
from libconformal.lib.fields import (
    AffineMap,
    ConstantMap,
    FunctionMap,
    MetricField,
    OneFormField,
    VectorFieldOnM,
)
from libconformal.lib.metrics import (
    AlphaBetaMetric,
    Kropina,
    PhiFamily,
    phi_from_description,
)
from libconformal.lib.polynomial import ComponentMap

logger = logging.getLogger(__name__)

# Constraint checks on scenario parameters are relative to this
CONSTRAINT_TOLERANCE = 1e-9

# Margins kept from the singular sets of the Kropina family
FACTOR_MARGIN = 0.1

DEFAULT_HALF_WIDTH = 0.5
SHRINK_FACTOR = 0.9
MAX_SHRINKS = 60
GRID_POINTS = 11


@dataclass
class ScenarioExpectation:
    """
    Values a correct run is expected to find, when known in closed form
    """

    factor: Optional[Callable[[np.ndarray], float]] = None
    # Ratio of the fitted to the expected factor under the formulas used here
    factor_convention: float = 1.0
    tau: Optional[Callable[[np.ndarray], float]] = None
    conformal: Optional[bool] = None
    homothetic: Optional[bool] = None
    killing: Optional[bool] = None


@dataclass
class Scenario:
    name: str
    a: MetricField
    b: OneFormField
    V: VectorFieldOnM
    phi: PhiFamily
    domain: DomainBox
    expected: ScenarioExpectation = field(default_factory=ScenarioExpectation)
    family_params: Optional["KropinaFamilyParams"] = None
    degenerate: bool = False
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        dims = {self.a.dim, self.b.dim, self.V.dim, self.domain.dim}
        if len(dims) != 1:
            raise ConfigError(f"Scenario {self.name} mixes dimensions {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def metric(self) -> AlphaBetaMetric:
        return AlphaBetaMetric(alpha=self.a, beta=self.b, phi=self.phi)

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dim": self.dim,
            "phi": self.phi.describe(),
            "domain": {
                "lower": list(self.domain.lower),
                "upper": list(self.domain.upper),
            },
            "degenerate": self.degenerate,
            "factor_convention": self.expected.factor_convention,
            "params": self.params,
        }


class SpaceFormMetric(SmoothMap):
    """
    a_ij = 4 delta_ij / (1 + mu |x|^2)^2, constant sectional curvature mu
    """

    def __init__(self, mu: float, dim: int, domain: Optional[DomainBox] = None):
        super().__init__(dim, (dim, dim), domain=domain)
        self.mu = mu

    def _d(self, x):
        return 1 + self.mu * float(x @ x)

    def value(self, x):
        return 4 / self._d(x) ** 2 * np.eye(self.dim)

    def gradient(self, x):
        d = self._d(x)
        d_k = 2 * self.mu * x
        return np.eye(self.dim)[:, :, None] * (-8 * d_k / d**3)[None, None, :]

    def hessian(self, x):
        d = self._d(x)
        d_k = 2 * self.mu * x
        d_kl = 2 * self.mu * np.eye(self.dim)
        scalar = 24 * np.outer(d_k, d_k) / d**4 - 8 * d_kl / d**3
        return np.eye(self.dim)[:, :, None, None] * scalar[None, None, :, :]


class MoebiusField(SmoothMap):
    """
    V^i = 2 <x, k> x^i - |x|^2 k^i
    """

    def __init__(self, k, domain: Optional[DomainBox] = None):
        self.k = np.array(k, dtype=float)
        super().__init__(self.k.size, (self.k.size,), domain=domain)

    def value(self, x):
        return 2 * (x @ self.k) * x - (x @ x) * self.k

    def gradient(self, x):
        n = self.dim
        return (
            2 * np.outer(x, self.k)
            + 2 * (x @ self.k) * np.eye(n)
            - 2 * np.outer(self.k, x)
        )

    def hessian(self, x):
        n = self.dim
        eye = np.eye(n)
        # d_l d_j V^i = 2 k_j delta_il + 2 k_l delta_ij - 2 delta_jl k_i
        return (
            2 * np.einsum("j,il->ijl", self.k, eye)
            + 2 * np.einsum("l,ij->ijl", self.k, eye)
            - 2 * np.einsum("i,jl->ijl", self.k, eye)
        )


class WarpedProductMetric(SmoothMap):
    """
    diag(1, ..., 1, 1 + (x^1)^2)
    """

    def value(self, x):
        g = np.eye(self.dim)
        g[-1, -1] = 1 + x[0] ** 2
        return g

    def gradient(self, x):
        grad = np.zeros((self.dim, self.dim, self.dim))
        grad[-1, -1, 0] = 2 * x[0]
        return grad

    def hessian(self, x):
        hess = np.zeros((self.dim,) * 4)
        hess[-1, -1, 0, 0] = 2.0
        return hess


@dataclass
class KropinaFamilyParams:
    """
    Parameters of the Kropina metrics alpha^2 / beta on a space form with
    non-homothetic conformal fields. Variant A uses f(c)^2 = -1/(mu c^2),
    variant B uses f(c)^2 = 2 / (mu (<eta, gamma> + mu |gamma|^2 - 2 c^2)) with tau = 0.
    """

    n: int
    mu: float
    tau: float
    eta: np.ndarray
    gamma: np.ndarray
    Q: np.ndarray
    variant: str = "A"

    def __post_init__(self):
        self.eta = np.array(self.eta, dtype=float)
        self.gamma = np.array(self.gamma, dtype=float)
        self.Q = np.array(self.Q, dtype=float)

        if self.n < 2:
            raise ConfigError("Dimension must be at least 2")

        if self.eta.shape != (self.n,) or self.gamma.shape != (self.n,):
            raise ConfigError(f"eta and gamma must have {self.n} components")

        if self.Q.shape != (self.n, self.n):
            raise ConfigError(f"Q must be a {self.n}x{self.n} matrix")

        if self.variant not in ("A", "B"):
            raise ConfigError(f"Unknown variant: {self.variant}")

        if self.mu == 0:
            raise ConfigError("mu must be nonzero")

    @property
    def xi(self) -> np.ndarray:
        return self.mu * self.gamma + self.eta

    @property
    def K(self) -> float:
        return float(self.eta @ self.gamma + self.mu * self.gamma @ self.gamma)

    @property
    def complement(self) -> bool:
        """
        eta = -mu gamma, where the conformal field is homothetic
        """
        return bool(
            np.allclose(self.eta, -self.mu * self.gamma, atol=CONSTRAINT_TOLERANCE)
        )

    def to_document(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "mu": self.mu,
            "tau": self.tau,
            "eta": self.eta.tolist(),
            "gamma": self.gamma.tolist(),
            "Q": self.Q.tolist(),
            "variant": self.variant,
        }

    def validate(self) -> None:
        """
        Raise ConstraintViolation naming the first violated constraint
        """

        scale = max(
            1.0,
            float(np.max(np.abs(self.Q))),
            float(np.max(np.abs(self.eta))),
            float(np.max(np.abs(self.gamma))),
            abs(self.mu),
            abs(self.tau),
        )

        def check(name: str, defect: float):
            if defect > CONSTRAINT_TOLERANCE * scale**3:
                raise ConstraintViolation(name, defect)

        check("Q antisymmetric", float(np.max(np.abs(self.Q + self.Q.T))))
        check(
            "Q eta = -mu (4 tau gamma + Q gamma)",
            float(
                np.max(
                    np.abs(
                        self.Q @ self.eta
                        + self.mu * (4 * self.tau * self.gamma + self.Q @ self.gamma)
                    )
                )
            ),
        )
        check(
            "|eta|^2 = mu (mu |gamma|^2 - 4 tau^2)",
            abs(
                self.eta @ self.eta
                - self.mu * (self.mu * self.gamma @ self.gamma - 4 * self.tau**2)
            ),
        )

        if self.variant == "A":
            check(
                "<eta, gamma> = -mu |gamma|^2",
                abs(self.eta @ self.gamma + self.mu * self.gamma @ self.gamma),
            )
            if self.mu >= 0:
                raise ConstraintViolation("mu < 0", self.mu)
        else:
            check("tau = 0", abs(self.tau))


class KropinaFamilyFactor(SmoothMap):
    """
    c = (tau (1 - mu |x|^2) + <mu gamma + eta, x>) / (1 + mu |x|^2)
    """

    def __init__(self, p: KropinaFamilyParams, domain: Optional[DomainBox] = None):
        super().__init__(p.n, (), domain=domain)
        self.p = p

    def _parts(self, x):
        p = self.p
        r2 = float(x @ x)
        N = p.tau * (1 - p.mu * r2) + float(p.xi @ x)
        D = 1 + p.mu * r2
        N_i = -2 * p.tau * p.mu * x + p.xi
        D_i = 2 * p.mu * x
        return N, D, N_i, D_i

    def value(self, x):
        N, D, _, _ = self._parts(x)
        return np.array(N / D)

    def gradient(self, x):
        N, D, N_i, D_i = self._parts(x)
        c = N / D
        return (N_i - c * D_i) / D

    def hessian(self, x):
        p = self.p
        N, D, N_i, D_i = self._parts(x)
        c = N / D
        c_i = (N_i - c * D_i) / D
        eye = np.eye(self.dim)
        N_ij = -2 * p.tau * p.mu * eye
        D_ij = 2 * p.mu * eye
        return (
            N_ij - np.outer(c_i, D_i) - c * D_ij - np.outer(D_i, c_i)
        ) / D

    def profile(self, c: float):
        """
        f(c) and f'(c) of the variant
        """

        p = self.p

        if p.variant == "A":
            if abs(c) <= VANISHING_NORM:
                raise DomainViolation("Variant A profile is singular at c = 0")
            f = 1 / (abs(c) * math.sqrt(-p.mu))
            return f, -f / c

        gap = p.K - 2 * c * c
        if p.mu * gap <= 0:
            raise DomainViolation(f"Variant B profile is undefined at c={c:.6g}")
        f = math.sqrt(2 / (p.mu * gap))
        return f, 2 * c * f / gap


class KropinaFamilyForm(SmoothMap):
    """
    b_i = f(c) c_i
    """

    def __init__(self, factor: KropinaFamilyFactor):
        super().__init__(factor.dim, (factor.dim,), domain=factor.domain)
        self.factor = factor

    def value(self, x):
        c = float(self.factor.value(x))
        f, _ = self.factor.profile(c)
        return f * self.factor.gradient(x)

    def gradient(self, x):
        c = float(self.factor.value(x))
        f, df = self.factor.profile(c)
        c_i = self.factor.gradient(x)
        return df * np.outer(c_i, c_i) + f * self.factor.hessian(x)


class KropinaFamilyField(SmoothMap):
    """
    V^i = -2 (tau + <eta, x>) x^i + |x|^2 eta^i + (Q x)^i + gamma^i
    """

    def __init__(self, p: KropinaFamilyParams, domain: Optional[DomainBox] = None):
        super().__init__(p.n, (p.n,), domain=domain)
        self.p = p

    def value(self, x):
        p = self.p
        return (
            -2 * (p.tau + p.eta @ x) * x + (x @ x) * p.eta + p.Q @ x + p.gamma
        )

    def gradient(self, x):
        p = self.p
        n = self.dim
        # d_j V^i = -2 eta_j x^i - 2 (tau + <eta, x>) delta_ij + 2 x_j eta^i + Q_ij
        return (
            -2 * np.outer(x, p.eta)
            - 2 * (p.tau + p.eta @ x) * np.eye(n)
            + 2 * np.outer(p.eta, x)
            + p.Q
        )

    def hessian(self, x):
        p = self.p
        eye = np.eye(self.dim)
        # d_l d_j V^i = -2 eta_j delta_il - 2 eta_l delta_ij + 2 delta_jl eta^i
        return (
            -2 * np.einsum("j,il->ijl", p.eta, eye)
            - 2 * np.einsum("l,ij->ijl", p.eta, eye)
            + 2 * np.einsum("i,jl->ijl", p.eta, eye)
        )


def _grid(domain: DomainBox) -> np.ndarray:
    axes = [
        np.linspace(lo, up, GRID_POINTS) for lo, up in zip(domain.lower, domain.upper)
    ]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, domain.dim)


def _family_margin(p: KropinaFamilyParams, factor: KropinaFamilyFactor, x) -> float:
    """
    Smallest distance to the singular sets at x, must stay above FACTOR_MARGIN
    """

    margins = [1 + p.mu * float(x @ x)]

    if not p.complement:
        c = float(factor.value(x))
        if p.variant == "A":
            margins.append(abs(c))
        else:
            margins.append(p.mu * (p.K - 2 * c * c))

    return min(margins)


def family_domain(p: KropinaFamilyParams) -> DomainBox:
    """
    Shrink the box |x_i| <= 0.5 until the family is regular on it with margin
    """

    factor = KropinaFamilyFactor(p)
    domain = DomainBox.cube(p.n, DEFAULT_HALF_WIDTH)

    for _ in range(MAX_SHRINKS):
        if all(_family_margin(p, factor, x) >= FACTOR_MARGIN for x in _grid(domain)):
            return domain
        domain = domain.shrink(SHRINK_FACTOR)

    raise DomainViolation(
        f"No box around the origin keeps the variant {p.variant} factor regular"
    )


def build_kropina_family(
    p: KropinaFamilyParams, domain: Optional[DomainBox] = None
) -> Scenario:
    """
    Kropina metric alpha^2 / beta with alpha the space form of curvature mu,
    beta = f(c) dc, and the vector field V conformal to it
    """

    p.validate()

    if domain is None:
        domain = family_domain(p)
    else:
        factor = KropinaFamilyFactor(p)
        worst = min(_family_margin(p, factor, x) for x in _grid(domain))
        if worst <= 0:
            raise DomainViolation(
                f"Variant {p.variant} factor is singular on the requested box, margin: {worst:.3e}"
            )

    factor = KropinaFamilyFactor(p, domain=domain)
    degenerate = p.complement

    if degenerate:
        # eta = -mu gamma forces tau = 0 and c = 0, so beta vanishes identically
        logger.warning(
            "eta = -mu gamma: the factor vanishes identically and beta degenerates to 0"
        )
        one_form = ConstantMap(np.zeros(p.n), domain=domain)
    else:
        one_form = KropinaFamilyForm(factor)

    return Scenario(
        name=f"kropina-family-{p.variant}",
        a=MetricField(SpaceFormMetric(p.mu, p.n, domain=domain)),
        b=OneFormField(one_form),
        V=VectorFieldOnM(KropinaFamilyField(p, domain=domain)),
        phi=Kropina(),
        domain=domain,
        expected=ScenarioExpectation(
            factor=lambda x: float(factor.value(x)),
            # Both the fits and the direct defect recover -c on this family
            factor_convention=-1.0,
            conformal=True,
            homothetic=degenerate,
            killing=degenerate,
        ),
        family_params=p,
        degenerate=degenerate,
        params=p.to_document(),
    )


def profile_ode_residual(p: KropinaFamilyParams, c: float) -> float:
    """
    |f'(c) - 2 (c - tau) f(c) / (2 tau c - 2 c^2 + mu |gamma|^2 + <eta, gamma>)|
    """

    denominator = 2 * p.tau * c - 2 * c * c + p.K
    if abs(denominator) <= VANISHING_NORM:
        raise PreconditionError(f"Profile ODE is singular at c={c:.6g}")

    f, df = KropinaFamilyFactor(p).profile(c)
    return abs(df - 2 * (c - p.tau) * f / denominator)


def _flat(n: int, domain: DomainBox) -> MetricField:
    return MetricField(ConstantMap(np.eye(n), domain=domain))


def _unit_form(n: int, domain: DomainBox, axis: int = 0) -> OneFormField:
    return OneFormField(ConstantMap(np.eye(n)[axis], domain=domain))


def _zero_field(n: int, domain: DomainBox) -> VectorFieldOnM:
    return VectorFieldOnM(ConstantMap(np.zeros(n), domain=domain))


def _domain(params: Dict[str, Any], n: int) -> DomainBox:
    return DomainBox.cube(n, params.get("half_width", DEFAULT_HALF_WIDTH))


def _flat_euclidean(params):
    n = params.get("n", 2)
    domain = _domain(params, n)
    return Scenario(
        name="flat-euclidean",
        a=_flat(n, domain),
        b=_unit_form(n, domain),
        V=_zero_field(n, domain),
        phi=phi_from_description(params.get("phi")),
        domain=domain,
        expected=ScenarioExpectation(
            factor=lambda x: 0.0,
            tau=lambda x: 0.0,
            conformal=True,
            homothetic=True,
            killing=True,
        ),
    )


def _space_form(params):
    n = params.get("n", 3)
    mu = params.get("mu", 1.0)
    domain = _domain(params, n)
    if mu < 0 and 1 + mu * n * domain.upper[0] ** 2 <= FACTOR_MARGIN:
        raise ConfigError(f"Box leaves the chart of the space form with mu={mu}")
    return Scenario(
        name="space-form",
        a=MetricField(SpaceFormMetric(mu, n, domain=domain)),
        b=_unit_form(n, domain),
        V=_zero_field(n, domain),
        phi=phi_from_description(params.get("phi")),
        domain=domain,
        expected=ScenarioExpectation(
            factor=lambda x: 0.0, conformal=True, homothetic=True, killing=True
        ),
    )


def _dilation(params):
    n = params.get("n", 2)
    lam = float(params.get("lambda", 0.8))
    domain = _domain(params, n)
    return Scenario(
        name="flat+const-b+dilation",
        a=_flat(n, domain),
        b=_unit_form(n, domain),
        V=VectorFieldOnM(AffineMap(lam * np.eye(n), domain=domain)),
        phi=phi_from_description(params.get("phi")),
        domain=domain,
        expected=ScenarioExpectation(
            factor=lambda x: lam / 2,
            tau=lambda x: lam,
            conformal=True,
            homothetic=True,
            killing=lam == 0,
        ),
    )


def _rotation_parts(params, n):
    default_q = np.zeros((n, n))
    default_q[0, 1], default_q[1, 0] = 1.0, -1.0
    Q = np.array(params.get("Q", default_q), dtype=float)
    axis = params.get("b_axis", n - 1)
    b = np.eye(n)[axis]

    if np.max(np.abs(Q + Q.T)) > CONSTRAINT_TOLERANCE:
        raise ConstraintViolation("Q antisymmetric", float(np.max(np.abs(Q + Q.T))))

    # M_i = b^j Q_ji vanishes only for b in the kernel of Q^T
    if np.max(np.abs(Q.T @ b)) > CONSTRAINT_TOLERANCE:
        raise ConstraintViolation("Q^T b = 0", float(np.max(np.abs(Q.T @ b))))

    return Q, axis


def _rotation(params):
    n = params.get("n", 3)
    domain = _domain(params, n)
    Q, axis = _rotation_parts(params, n)
    return Scenario(
        name="flat+const-b+rotation",
        a=_flat(n, domain),
        b=_unit_form(n, domain, axis),
        V=VectorFieldOnM(AffineMap(Q, domain=domain)),
        phi=phi_from_description(params.get("phi")),
        domain=domain,
        expected=ScenarioExpectation(
            factor=lambda x: 0.0,
            tau=lambda x: 0.0,
            conformal=True,
            homothetic=True,
            killing=True,
        ),
        params={"Q": Q.tolist()},
    )


def _linear(params):
    n = params.get("n", 3)
    lam = float(params.get("lambda", 0.5))
    domain = _domain(params, n)
    Q, axis = _rotation_parts(params, n)
    offset = np.array(params.get("offset", np.zeros(n)), dtype=float)
    return Scenario(
        name="flat+const-b+linear",
        a=_flat(n, domain),
        b=_unit_form(n, domain, axis),
        V=VectorFieldOnM(AffineMap(lam * np.eye(n) + Q, offset, domain=domain)),
        phi=phi_from_description(params.get("phi")),
        domain=domain,
        expected=ScenarioExpectation(
            factor=lambda x: lam / 2,
            tau=lambda x: lam,
            conformal=True,
            homothetic=True,
            killing=lam == 0,
        ),
        params={"lambda": lam, "Q": Q.tolist(), "offset": offset.tolist()},
    )


def _moebius(params):
    n = params.get("n", 2)
    k = np.array(params.get("k", np.eye(n)[1]), dtype=float)
    domain = _domain(params, n)
    return Scenario(
        name="flat+const-b+moebius",
        a=_flat(n, domain),
        b=_unit_form(n, domain),
        V=VectorFieldOnM(MoebiusField(k, domain=domain)),
        phi=phi_from_description(params.get("phi")),
        domain=domain,
        expected=ScenarioExpectation(conformal=False),
        params={"k": k.tolist()},
    )


def _perturbed(params):
    n = params.get("n", 2)
    delta = float(params.get("delta", 0.1))
    domain = _domain(params, n)

    def value(x):
        b = np.eye(n)[0].copy()
        b[0] += delta * x[1]
        return b

    def gradient(x):
        db = np.zeros((n, n))
        db[0, 1] = delta
        return db

    return Scenario(
        name="flat+perturbed-b",
        a=_flat(n, domain),
        b=OneFormField(FunctionMap(n, (n,), value, gradient, domain=domain)),
        V=_zero_field(n, domain),
        phi=phi_from_description(params.get("phi")),
        domain=domain,
        expected=ScenarioExpectation(
            factor=lambda x: 0.0, conformal=True, homothetic=True, killing=True
        ),
        params={"delta": delta},
    )


def _warped(params):
    n = params.get("n", 3)
    domain = _domain(params, n)
    return Scenario(
        name="warped-product",
        a=MetricField(WarpedProductMetric(n, (n, n), domain=domain)),
        b=_unit_form(n, domain),
        V=_zero_field(n, domain),
        phi=phi_from_description(params.get("phi")),
        domain=domain,
        expected=ScenarioExpectation(
            factor=lambda x: 0.0, conformal=True, homothetic=True, killing=True
        ),
    )


BUILTINS = {
    "flat-euclidean": (_flat_euclidean, "Flat metric, constant unit b, V = 0"),
    "space-form": (_space_form, "Constant curvature mu, constant b, V = 0"),
    "flat+const-b+dilation": (_dilation, "Flat, constant unit b, V = lambda x"),
    "flat+const-b+rotation": (_rotation, "Flat, b in the kernel of Q^T, V = Q x"),
    "flat+const-b+linear": (_linear, "Flat, V = lambda x + Q x + offset"),
    "flat+const-b+moebius": (
        _moebius,
        "Flat, constant b, Moebius field (not conformal)",
    ),
    "flat+perturbed-b": (_perturbed, "Flat, b = (1 + delta x^2) dx^1, V = 0"),
    "warped-product": (_warped, "diag(1, ..., 1, 1 + (x^1)^2), V = 0"),
}


def builtin(name: str, params: Optional[Dict[str, Any]] = None) -> Scenario:
    try:
        factory, _ = BUILTINS[name]
    except KeyError as exc:
        raise ConfigError(f"Unknown builtin scenario: {name}") from exc

    params = dict(params or {})
    scenario = factory(params)
    scenario.params = {**params, **scenario.params}

    return scenario


def inline(document: Dict[str, Any]) -> Scenario:
    """
    Scenario from polynomial or rational coefficient tables
    """

    n = document["dim"]
    bounds = document.get("domain")
    domain = (
        DomainBox(tuple(bounds["lower"]), tuple(bounds["upper"]))
        if bounds
        else DomainBox.cube(n, DEFAULT_HALF_WIDTH)
    )

    if domain.dim != n:
        raise ConfigError(f"Domain dimension {domain.dim} differs from dim {n}")

    tables = {
        "metric": ComponentMap.parse(document["metric"], n, domain=domain),
        "one_form": ComponentMap.parse(document["one_form"], n, domain=domain),
        "vector_field": ComponentMap.parse(document["vector_field"], n, domain=domain),
    }
    shapes = {"metric": (n, n), "one_form": (n,), "vector_field": (n,)}

    for key, table in tables.items():
        if table.shape != shapes[key]:
            raise ConfigError(
                f"Inline {key} must have shape {shapes[key]}, got {table.shape}"
            )

    expected = document.get("expected", {})
    factor = expected.get("factor")

    return Scenario(
        name=document.get("name", "inline"),
        a=MetricField(tables["metric"]),
        b=OneFormField(tables["one_form"]),
        V=VectorFieldOnM(tables["vector_field"]),
        phi=phi_from_description(document.get("phi")),
        domain=domain,
        expected=ScenarioExpectation(
            factor=(lambda x: float(factor)) if factor is not None else None,
            factor_convention=expected.get("convention", 1.0),
            conformal=expected.get("conformal"),
            homothetic=expected.get("homothetic"),
            killing=expected.get("killing"),
        ),
    )


def scenario_from_document(document: Dict[str, Any]) -> Scenario:
    """
    Build the scenario named by the "scenario" entry of a run configuration
    """

    if "builtin" in document:
        entry = document["builtin"]
        return builtin(entry["name"], entry.get("params"))

    family = document.get("kropina_family", document.get("example1"))

    if family is not None:
        entry = dict(family)
        bounds = entry.pop("domain", None)
        domain = None
        if bounds:
            domain = DomainBox(tuple(bounds["lower"]), tuple(bounds["upper"]))
        return build_kropina_family(KropinaFamilyParams(**entry), domain)

    if "inline" in document:
        return inline(document["inline"])

    raise ConfigError(
        "Scenario must be one of builtin, kropina_family (example1) or inline"
    )
