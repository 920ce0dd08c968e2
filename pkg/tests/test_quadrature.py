"""Pins the Gauss-Kronrod tables and exercises the adaptive driver."""

import math

import numpy as np
import pytest

from zmcnoid import quadrature as qd


def monomial_integral(d):
    # integral of x^d over [-1, 1]
    return 0.0 if d % 2 else 2.0 / (d + 1)


def test_weight_sums():
    assert abs(qd.KRONROD_WEIGHTS.sum() - 2.0) < 1e-13
    assert abs(qd.GAUSS_WEIGHTS.sum() - 2.0) < 1e-13


def test_node_symmetry():
    assert np.max(np.abs(qd.KRONROD_NODES + qd.KRONROD_NODES[::-1])) == 0.0
    assert np.max(np.abs(qd.KRONROD_WEIGHTS - qd.KRONROD_WEIGHTS[::-1])) == 0.0


def test_embedded_gauss_matches_legendre():
    # odd-index Kronrod abscissae must be the Gauss-Legendre 7-point rule
    nodes, weights = np.polynomial.legendre.leggauss(7)
    assert np.max(np.abs(qd.KRONROD_NODES[1::2] - nodes)) < 5e-15
    assert np.max(np.abs(qd.GAUSS_WEIGHTS - weights)) < 5e-15


def test_kronrod_polynomial_exactness_to_degree_22():
    for d in range(23):
        got = float(qd.KRONROD_NODES ** d @ qd.KRONROD_WEIGHTS)
        assert abs(got - monomial_integral(d)) < 5e-14, d


def test_kronrod_not_exact_at_degree_24():
    got = float(qd.KRONROD_NODES ** 24 @ qd.KRONROD_WEIGHTS)
    assert abs(got - monomial_integral(24)) > 1e-10


def test_gauss_polynomial_exactness_to_degree_13():
    gauss_nodes = qd.KRONROD_NODES[1::2]
    for d in range(14):
        got = float(gauss_nodes ** d @ qd.GAUSS_WEIGHTS)
        assert abs(got - monomial_integral(d)) < 5e-14, d


def test_segment_polynomial():
    val = qd.integrate_segment(lambda z: 3.0 * z ** 2, 0j, 1 + 1j)
    assert abs(val - (1 + 1j) ** 3) < 1e-12


def test_segment_near_pole():
    pole = 0.5 + 0.01j
    exact = np.log(1 - pole) - np.log(-pole)
    val = qd.integrate_segment(lambda z: 1.0 / (z - pole), 0j, 1 + 0j,
                               abs_tol=1e-12)
    assert abs(val - exact) < 5e-12


def test_depth_cap_raises():
    pole = 0.5 + 1e-6j
    with pytest.raises(qd.QuadratureError):
        qd.integrate_segment(lambda z: 1.0 / (z - pole), 0j, 1 + 0j,
                             abs_tol=1e-13, max_depth=3)


def test_polyline_accumulates():
    val = qd.integrate_polyline(lambda z: z, [0j, 1 + 0j, 1 + 1j])
    assert abs(val - 1j) < 1e-13


def test_polyline_skips_repeated_vertices():
    val = qd.integrate_polyline(lambda z: z, [0j, 0j, 1 + 0j, 1 + 0j, 1 + 1j])
    assert abs(val - 1j) < 1e-13


def test_polyline_rejects_degenerate_input():
    with pytest.raises(ValueError):
        qd.integrate_polyline(lambda z: z, [1j])
    with pytest.raises(ValueError):
        qd.integrate_polyline(lambda z: z, [1j, 1j, 1j])


def test_vector_integrand_componentwise():
    # stacked monomials integrate to independent components
    val = qd.integrate_segment(lambda z: np.stack([np.ones_like(z), z, z * z]),
                               0j, 2 + 0j)
    assert np.max(np.abs(val - np.array([2.0, 2.0, 8.0 / 3.0]))) < 1e-12


def test_error_estimate_positive_for_nonpolynomial():
    _, err = qd._gk_estimate(lambda z: np.exp(z) / (z + 1.3), -1 + 0j, 1 + 0j)
    assert np.all(err >= 0.0)
    assert np.max(err) > 0.0
