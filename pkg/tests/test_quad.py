import math

import numpy as np
import pytest

from univalens.errors import ConvergenceError, DomainError
from univalens.expr import parse
from univalens.quad import (
    GAUSS_WEIGHTS,
    KRONROD_NODES,
    KRONROD_WEIGHTS,
    QuadConfig,
    gauss_kronrod,
    integral_operator,
    operator_bracket,
    regularization_exponent,
)

EXAMPLE1 = parse("z/(1 - z^2/2)")
CATALOG = [parse(s) for s in ("z", "z/(1 - z^2/2)", "-log(1 - z)", "z*exp(z)", "z/(1 - z)^2")]
BETAS = [1, 2, 0.5, 1 + 1j]


def test_rule_constants():
    x, w = np.polynomial.legendre.leggauss(7)
    np.testing.assert_allclose(np.sort(KRONROD_NODES[GAUSS_WEIGHTS > 0]), np.sort(x), atol=1e-15)
    np.testing.assert_allclose(np.sort(GAUSS_WEIGHTS[GAUSS_WEIGHTS > 0]), np.sort(w), atol=1e-15)
    assert math.isclose(KRONROD_WEIGHTS.sum(), 2.0, rel_tol=1e-15)


def test_kronrod_exact_for_degree_22():
    value, err = gauss_kronrod(lambda x: x**22, -1.0, 1.0)
    assert math.isclose(value, 2 / 23, rel_tol=1e-14)


def test_vector_valued_integrand():
    ks = np.arange(1, 6)
    value, err = gauss_kronrod(lambda x: np.cos(np.multiply.outer(x, ks)), 0.0, math.pi / 2)
    np.testing.assert_allclose(value, np.sin(ks * math.pi / 2) / ks, atol=1e-14)


def test_non_convergence_raises():
    cfg = QuadConfig(rel_tol=1e-15, abs_tol=1e-300, max_subdivisions=2)
    with pytest.raises(ConvergenceError):
        gauss_kronrod(lambda x: np.sqrt(np.abs(x - 0.3)), 0.0, 1.0, cfg)


@pytest.mark.parametrize("beta, q", [(1, 2), (2, 2), (0.5, 3), (0.3, 5), (1 + 1j, 2)])
def test_regularization_exponent(beta, q):
    assert regularization_exponent(beta) == q


def test_bracket_is_one_at_origin():
    value, _ = operator_bracket(EXAMPLE1, 1 + 1j, 0.0)
    assert abs(value - 1) < 1e-14


def test_spot_value_against_closed_form():
    # antiderivative of z f'(z) is z f(z) + log(1 - z^2/2)
    expected = math.sqrt(2 * (0.25 / 0.875 + math.log(0.875)))
    assert abs(integral_operator(EXAMPLE1, 2, 0.5) - expected) < 1e-12


@pytest.mark.parametrize("f", CATALOG, ids=str)
@pytest.mark.parametrize("beta", BETAS)
def test_normalization_near_origin(f, beta):
    z = 1e-6 * np.exp(1j * np.linspace(0, 2 * np.pi, 8, endpoint=False))
    assert np.max(np.abs(integral_operator(f, beta, z) / z - 1)) < 1e-5


def test_beta_one_reduces_to_f():
    z = np.multiply.outer(np.linspace(0.05, 0.95, 10), np.exp(1j * np.linspace(-np.pi, np.pi, 10, endpoint=False)))
    assert np.max(np.abs(integral_operator(EXAMPLE1, 1, z) - EXAMPLE1(z))) < 1e-10


@pytest.mark.parametrize("beta", BETAS)
def test_halving_tolerance_stays_within_error_estimate(beta):
    z = np.array([0.3, 0.6j, -0.8 + 0.1j, 0.9])
    f = parse("z*exp(z)")
    a, err = integral_operator(f, beta, z, QuadConfig(rel_tol=1e-8), return_error=True)
    b = integral_operator(f, beta, z, QuadConfig(rel_tol=5e-9))
    # The estimate is for the bracket; F = z * B^(1/beta) scales it by about |F/(beta B)|.
    B = (a / z) ** beta
    scale = np.abs(a / (beta * B))
    assert np.all(np.abs(a - b) <= err * scale + 1e-15)


def test_domain_checks():
    with pytest.raises(DomainError):
        integral_operator(EXAMPLE1, 2, 1.0)
    with pytest.raises(DomainError):
        integral_operator(EXAMPLE1, -1, 0.5)
    with pytest.raises(DomainError):
        integral_operator(parse("z + 1"), 2, 0.5)
