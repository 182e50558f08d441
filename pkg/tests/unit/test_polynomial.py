# pylint: disable=missing-docstring,invalid-name
import numpy as np
import pytest

from libconformal.lib.diffgeo import jet_agreement
from libconformal.lib.exceptions import ConfigError
from libconformal.lib.polynomial import (
    ComponentMap,
    Polynomial,
    Rational,
    parse_component,
)

X = np.array([0.3, -0.4])


def test_polynomial():
    # 2 + 3 x y^2 - x^2
    p = Polynomial([(2.0, [0, 0]), (3.0, [1, 2]), (-1.0, [2, 0])], 2)
    x, y = X

    assert p.value(X) == pytest.approx(2 + 3 * x * y**2 - x**2)
    assert np.allclose(p.gradient(X), [3 * y**2 - 2 * x, 6 * x * y])
    assert np.allclose(p.hessian(X), [[-2.0, 6 * y], [6 * y, 6 * x]])


def test_empty_polynomial():
    p = Polynomial([], 3)

    assert p.value(np.ones(3)) == 0.0
    assert not np.any(p.gradient(np.ones(3)))


@pytest.mark.parametrize(
    "terms",
    [[(1.0, [1, 0, 0])], [(1.0, [-1, 0])]],
)
def test_polynomial_with_bad_powers(terms):
    with pytest.raises(ConfigError):
        Polynomial(terms, 2)


def test_rational():
    # x / (1 + y^2)
    q = Rational(
        Polynomial([(1.0, [1, 0])], 2),
        Polynomial([(1.0, [0, 0]), (1.0, [0, 2])], 2),
    )
    x, y = X
    d = 1 + y**2

    assert q.value(X) == pytest.approx(x / d)
    assert np.allclose(q.gradient(X), [1 / d, -2 * x * y / d**2])
    assert np.allclose(
        q.hessian(X),
        [[0.0, -2 * y / d**2], [-2 * y / d**2, -2 * x / d**2 + 8 * x * y**2 / d**3]],
    )


@pytest.mark.parametrize(
    "entry, expected",
    [
        (2.5, 2.5),
        ({"terms": [[1.0, [1, 1]]]}, X[0] * X[1]),
        (
            {
                "numerator": 1.0,
                "denominator": {"terms": [[1.0, [0, 0]], [1.0, [2, 0]]]},
            },
            1 / (1 + X[0] ** 2),
        ),
    ],
)
def test_parse_component(entry, expected):
    assert parse_component(entry, 2).value(X) == pytest.approx(expected)


@pytest.mark.parametrize("entry", ["x", [1.0], {"coefficients": [1.0]}])
def test_parse_bad_component(entry):
    with pytest.raises(ConfigError):
        parse_component(entry, 2)


@pytest.mark.parametrize("order, tol", [(1, 1e-9), (2, 1e-5)])
def test_component_map_jets(order, tol, analytic_config):
    table = [
        [{"terms": [[1.0, [0, 0]], [0.5, [2, 1]]]}, {"terms": [[0.2, [1, 1]]]}],
        [
            {"terms": [[0.2, [1, 1]]]},
            {
                "numerator": 1.0,
                "denominator": {"terms": [[1.0, [0, 0]], [0.5, [0, 2]]]},
            },
        ],
    ]
    f = ComponentMap.parse(table, 2)

    assert f.shape == (2, 2)
    expected = [[1 + 0.5 * 0.09 * -0.4, -0.024], [-0.024, 1 / 1.08]]

    assert np.allclose(f.value(X), expected)
    assert jet_agreement(f, X, analytic_config, order=order) <= tol
