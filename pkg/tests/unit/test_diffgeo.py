# pylint: disable=missing-docstring,invalid-name
import numpy as np
import pytest

from libconformal.lib.base import DiffConfig, DomainBox
from libconformal.lib.catalog import SpaceFormMetric, WarpedProductMetric
from libconformal.lib.constants import Scheme
from libconformal.lib.diffgeo import (
    beta_invariants,
    central_difference,
    christoffel,
    covderiv_oneform,
    covderiv_vector,
    jet,
    jet_agreement,
    metric_compatibility_residual,
    norm_squared,
    ricci,
)
from libconformal.lib.exceptions import (
    ConfigError,
    MetricNotPositiveDefinite,
    NonFiniteEvaluation,
    PointTooCloseToBoundary,
)
from libconformal.lib.fields import (
    AffineMap,
    ConstantMap,
    FunctionMap,
    MetricField,
    OneFormField,
    VectorFieldOnM,
)


def test_domain_box():
    box = DomainBox.cube(3, 0.5)

    assert box.dim == 3
    assert box.contains(np.zeros(3))
    assert not box.contains(np.array([0.49, 0.0, 0.0]), margin=0.02)
    assert box.shrink(0.5).upper == (0.25, 0.25, 0.25)
    assert box.distance_to_boundary(np.array([0.1, 0.2, -0.4])) == pytest.approx(0.1)


@pytest.mark.parametrize(
    "lower, upper",
    [((0.0,), (1.0,)), ((0.0, 0.0), (1.0,)), ((0.0, 1.0), (1.0, 1.0))],
)
def test_domain_box_with_bad_bounds(lower, upper):
    with pytest.raises(ConfigError):
        DomainBox(lower, upper)


def test_diff_config_with_bad_steps():
    with pytest.raises(ConfigError):
        DiffConfig(h_first=1e-3, h_second=1e-5)

    with pytest.raises(ConfigError):
        DiffConfig(h_first=0)


@pytest.mark.parametrize(
    "scheme, tol", [(Scheme.CENTRAL2, 1e-8), (Scheme.CENTRAL4, 1e-10)]
)
def test_central_difference(scheme, tol):
    cfg = DiffConfig(scheme=scheme)
    x = np.array([0.3, -0.2])

    def func(z):
        return np.array([np.sin(z[0]) * np.exp(z[1])])

    expected = np.array([[np.cos(x[0]) * np.exp(x[1]), np.sin(x[0]) * np.exp(x[1])]])
    result = central_difference(func, x, cfg.steps(x, cfg.h_first), cfg.stencil)

    assert result.shape == (1, 2)
    assert np.max(np.abs(result - expected)) <= tol


def test_central_difference_with_non_finite_values():
    with pytest.raises(NonFiniteEvaluation):
        central_difference(
            lambda z: np.array([1 / z[0] if z[0] > 0 else np.nan]),
            np.array([0.0, 0.0]),
            np.array([1e-5, 1e-5]),
            DiffConfig().stencil,
        )


def test_jet_of_affine_map(analytic_config, central4_config):
    f = AffineMap([[1.0, 2.0], [3.0, -1.0]], [0.5, 0.0])
    x = np.array([0.2, 0.1])

    closed = jet(f, x, 2, analytic_config)
    numeric = jet(f, x, 2, central4_config)

    assert closed.analytic
    assert not numeric.analytic
    assert np.allclose(closed.gradient, f.matrix)
    assert np.max(np.abs(numeric.gradient - f.matrix)) <= 1e-9
    assert np.max(np.abs(numeric.hessian)) <= 1e-6
    assert numeric.symmetry_defect <= 1e-6


def test_jet_with_bad_order(analytic_config):
    with pytest.raises(ValueError):
        jet(ConstantMap([1.0, 0.0]), np.zeros(2), 3, analytic_config)


def test_jet_near_boundary(central4_config):
    domain = DomainBox.cube(2, 0.5)
    f = ConstantMap([1.0, 0.0], domain=domain)

    with pytest.raises(PointTooCloseToBoundary):
        jet(f, np.array([0.5 - 1e-6, 0.0]), 1, central4_config)


@pytest.mark.parametrize("order, tol", [(1, 1e-9), (2, 1e-5)])
def test_jet_agreement(order, tol, analytic_config):
    f = SpaceFormMetric(1.0, 3)
    x = np.array([0.1, -0.2, 0.3])

    assert jet_agreement(f, x, analytic_config, order=order) <= tol


def test_jet_agreement_without_closed_form(analytic_config):
    f = FunctionMap(2, (2,), lambda x: x**2)

    assert jet_agreement(f, np.array([0.1, 0.2]), analytic_config) is None


def test_metric_field_validation():
    x = np.zeros(2)

    with pytest.raises(MetricNotPositiveDefinite):
        MetricField(ConstantMap([[1.0, 0.0], [0.0, -1.0]])).at(x)

    with pytest.raises(MetricNotPositiveDefinite):
        MetricField(ConstantMap([[1.0, 0.5], [0.0, 1.0]])).at(x)

    with pytest.raises(ValueError):
        MetricField(ConstantMap([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], dim=2))


def test_flat_christoffel_symbols(analytic_config):
    a = MetricField(ConstantMap(np.eye(3)))

    assert not np.any(christoffel(a, np.array([0.1, 0.2, 0.3]), analytic_config))


@pytest.mark.parametrize("scheme", list(Scheme))
def test_space_form_christoffel_symbols(scheme):
    """
    Gamma^i_jk = -(delta_ij d_k + delta_ik d_j - delta_jk d_i) log D for a = 4 delta / D^2
    """

    cfg = DiffConfig(scheme=scheme)
    mu, n = 0.7, 3
    a = MetricField(SpaceFormMetric(mu, n))
    x = np.array([0.2, -0.1, 0.3])

    dlog = 2 * mu * x / (1 + mu * x @ x)
    eye = np.eye(n)
    expected = -(
        np.einsum("ij,k->ijk", eye, dlog)
        + np.einsum("ik,j->ijk", eye, dlog)
        - np.einsum("jk,i->ijk", eye, dlog)
    )

    gamma = christoffel(a, x, cfg)

    assert np.max(np.abs(gamma - np.swapaxes(gamma, 1, 2))) <= 1e-12
    tol = 1e-6 if scheme is Scheme.CENTRAL2 else 1e-9
    assert np.max(np.abs(gamma - expected)) <= tol


@pytest.mark.parametrize(
    "metric", [SpaceFormMetric(-0.5, 3), WarpedProductMetric(3, (3, 3))]
)
def test_metric_compatibility(metric, analytic_config, central4_config):
    a = MetricField(metric)
    x = np.array([0.3, 0.1, -0.2])

    assert metric_compatibility_residual(a, x, analytic_config) <= 1e-12
    assert metric_compatibility_residual(a, x, central4_config) <= 1e-8


def test_covariant_derivatives_on_flat_metric(analytic_config):
    a = MetricField(ConstantMap(np.eye(2)))
    b = OneFormField(AffineMap([[0.0, 0.1], [0.0, 0.0]], [1.0, 0.0]))
    V = VectorFieldOnM(AffineMap([[0.8, 1.0], [-1.0, 0.8]]))
    x = np.array([0.1, 0.2])

    db = covderiv_oneform(a, b, x, analytic_config)
    dV = covderiv_vector(a, V, x, analytic_config)

    assert np.allclose(db, [[0.0, 0.1], [0.0, 0.0]])
    assert np.allclose(dV, [[0.8, 1.0], [-1.0, 0.8]])


def test_beta_invariants(analytic_config):
    delta = 0.1
    a = MetricField(ConstantMap(np.eye(2)))
    b = OneFormField(AffineMap([[0.0, delta], [0.0, 0.0]], [1.0, 0.0]))
    x = np.array([0.2, 0.3])

    invariants = beta_invariants(a, b, x, analytic_config)
    b0 = 1 + delta * x[1]

    assert invariants.b2 == pytest.approx(b0**2)
    assert np.allclose(invariants.r, [[0.0, delta / 2], [delta / 2, 0.0]])
    assert np.allclose(invariants.s, [[0.0, delta / 2], [-delta / 2, 0.0]])
    assert np.allclose(invariants.s_low, [0.0, b0 * delta / 2])
    assert np.allclose(invariants.r + invariants.s, invariants.cov)


def test_norm_squared():
    a = MetricField(ConstantMap(np.diag([4.0, 1.0])))
    b = OneFormField(ConstantMap([2.0, 3.0]))

    assert norm_squared(a, b, np.zeros(2)) == pytest.approx(10.0)


def test_flat_ricci(analytic_config):
    a = MetricField(ConstantMap(np.eye(3)))

    assert not np.any(ricci(a, np.array([0.1, 0.0, 0.2]), analytic_config))


@pytest.mark.parametrize(
    "scheme, tol", [(Scheme.ANALYTIC, 1e-9), (Scheme.CENTRAL4, 1e-5)]
)
@pytest.mark.parametrize("mu", [1.0, -0.5])
def test_space_form_ricci(mu, scheme, tol):
    """
    Ric = (n - 1) mu a for constant sectional curvature mu
    """

    n = 3
    a = MetricField(SpaceFormMetric(mu, n))
    x = np.array([0.1, 0.25, -0.15])

    ric = ricci(a, x, DiffConfig(scheme=scheme))

    assert np.max(np.abs(ric - (n - 1) * mu * a.at(x))) <= tol


def test_warped_product_ricci(analytic_config):
    """
    diag(1, 1, f^2) with f = sqrt(1 + x1^2): Ric = diag(-f''/f, 0, -f f'')
    """

    a = MetricField(WarpedProductMetric(3, (3, 3)))
    x = np.array([0.3, 0.1, -0.2])

    f = np.sqrt(1 + x[0] ** 2)
    f2 = (1 + x[0] ** 2) ** -1.5

    ric = ricci(a, x, analytic_config)

    assert np.allclose(ric, np.diag([-f2 / f, 0.0, -f * f2]), atol=1e-9)
