import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from magtrace.geometry import (
    ManifoldQuadrature,
    PointMagneticData,
    integrate_f0,
    landau_level,
    local_density_f0,
    magnetic_frequencies,
    quadrature_from_csv,
    quadrature_to_csv,
    sphere_quadrature,
    torus_quadrature,
)
from magtrace.probes import TestFunction, evaluate

TWO_PI = 2.0 * math.pi


def torus_point(dim=2, V=0.0):
    F = np.zeros((dim, dim))
    F[0, 1], F[1, 0] = TWO_PI, -TWO_PI
    return PointMagneticData(np.eye(dim), F, V)


def sphere_point(R=1.0, theta=math.pi / 3):
    g = np.diag([R**2, (R * math.sin(theta)) ** 2])
    s = 0.5 * math.sin(theta)
    return PointMagneticData(g, np.array([[0.0, s], [-s, 0.0]]))


def test_frequencies_torus():
    fr = magnetic_frequencies(torus_point())
    assert fr.rank2n == 2 and not fr.rank_warning
    assert_allclose(fr.a, [TWO_PI], rtol=1e-14)


def test_frequencies_sphere_point():
    # eigen-decomposition oracle: imaginary parts of eig(g^{-1} F)
    p = sphere_point()
    J = np.linalg.solve(p.g, p.F)
    oracle = np.abs(np.linalg.eigvals(J).imag).max()
    fr = magnetic_frequencies(p)
    assert_allclose(fr.a, [0.5], rtol=1e-13)         # Landau spacing 1/(2R^2), R=1
    assert_allclose(fr.a[0], oracle, rtol=1e-12)


def test_frequencies_torus3_kernel_direction():
    fr = magnetic_frequencies(torus_point(dim=3))
    assert fr.rank2n == 2
    assert_allclose(fr.a, [TWO_PI], rtol=1e-14)


def test_frequency_scaling_and_congruence_invariance():
    rng = np.random.default_rng(42)
    for _ in range(100):
        d = int(rng.integers(2, 5))
        M = rng.normal(size=(d, d))
        g = M @ M.T + d * np.eye(d)
        B = rng.normal(size=(d, d))
        F = B - B.T
        fr = magnetic_frequencies(PointMagneticData(g, F))
        assert fr.rank2n % 2 == 0
        c = float(rng.uniform(0.1, 10.0))
        fr_scaled = magnetic_frequencies(PointMagneticData(g, c * F))
        assert_allclose(fr_scaled.a, [c * a for a in fr.a], rtol=1e-10)
        S = rng.normal(size=(d, d)) + d * np.eye(d)
        fr_cong = magnetic_frequencies(PointMagneticData(S.T @ g @ S, S.T @ F @ S))
        assert_allclose(fr_cong.a, fr.a, rtol=1e-8)


def test_rank_warning_near_cutoff():
    # second frequency sits right at the rank cutoff scale: flagged, not silently dropped
    F = np.zeros((4, 4))
    F[0, 1], F[1, 0] = 1.0, -1.0
    F[2, 3], F[3, 2] = 3e-10, -3e-10
    fr = magnetic_frequencies(PointMagneticData(np.eye(4), F))
    assert fr.rank_warning


def test_landau_level_values():
    fr = magnetic_frequencies(torus_point())
    assert_allclose(landau_level(fr, 0.0, (0,)), TWO_PI, rtol=1e-14)
    fr_sphere = magnetic_frequencies(sphere_point())
    assert_allclose(landau_level(fr_sphere, 0.0, (2,)), 2.5, rtol=1e-13)
    two = magnetic_frequencies(
        PointMagneticData(np.eye(4), np.array([
            [0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 3], [0, 0, -3, 0]], dtype=float))
    )
    assert_allclose(landau_level(two, 0.5, (1, 0)), 6.5, rtol=1e-14)
    with pytest.raises(ValueError):
        landau_level(two, 0.0, (1,))


def test_local_density_torus():
    phi = TestFunction("gaussian", mu=TWO_PI, sigma=1.0)
    # direct summation oracle: (1/2pi) * 2pi * sum_j phi(2pi(2j+1)); j >= 1 below 1e-60
    oracle = math.fsum(evaluate(phi, TWO_PI * (2 * j + 1)) for j in range(10))
    val = local_density_f0(torus_point(), phi)
    assert_allclose(val, oracle, rtol=1e-14)
    assert_allclose(val, 1.0, rtol=1e-12)


def test_local_density_sphere_point():
    phi = TestFunction("gaussian", mu=1.5, sigma=0.5)
    # frozen from the direct Landau-sum oracle: (1/4pi) sum_j phi((2j+1)/2)
    assert_allclose(local_density_f0(sphere_point(), phi), 0.10114344732748724, rtol=1e-12)


def test_local_density_d3_radial_vs_quadrature_oracle():
    phi = TestFunction("gaussian", mu=TWO_PI, sigma=1.0)
    # oracle: (1/2pi) sum_k int_R phi(xi^2 + 2pi(2k+1)) dxi by adaptive quadrature
    total = 0.0
    for k in range(6):
        beta = TWO_PI * (2 * k + 1)
        v, _ = quad(lambda u: evaluate(phi, beta + u * u), 0, 12.0, epsabs=1e-15, limit=300)
        total += 2.0 * v
    oracle = total / TWO_PI
    assert_allclose(local_density_f0(torus_point(dim=3), phi), oracle, rtol=1e-10)


def test_local_density_refinement_consistency():
    phi = TestFunction("gaussian", mu=4.0, sigma=1.5)
    p = sphere_point(R=1.3, theta=1.0)
    coarse = local_density_f0(p, phi, truncation_tol=1e-6)
    fine = local_density_f0(p, phi, truncation_tol=1e-12)
    assert abs(coarse - fine) < 1e-6


def test_integrate_f0_single_node_equals_local():
    phi = TestFunction("gaussian", mu=TWO_PI, sigma=1.0)
    q = ManifoldQuadrature(((torus_point(), 1.0),))
    assert_allclose(integrate_f0(q, phi), local_density_f0(torus_point(), phi), rtol=1e-15)


def test_integrate_f0_sphere_reproduces_landau_sum():
    phi = TestFunction("gaussian", mu=1.5, sigma=0.5)
    q = sphere_quadrature(1.0, n_theta=12, n_phi=4)
    # integrand is theta-independent; total weight 4pi cancels (1/2pi)(1/2)
    assert_allclose(integrate_f0(q, phi), 1.2710060443311204, rtol=1e-10)


def test_integrate_f0_hyperbolic_genus2():
    phi = TestFunction("gaussian", mu=1.0, sigma=0.3)
    genus, R = 2, 1.0
    g = R**2 * np.eye(2)  # y = 1 chart point of the hyperbolic plane
    F = np.array([[0.0, 1.0], [-1.0, 0.0]])
    area = 4.0 * math.pi * (genus - 1) * R**2
    q = ManifoldQuadrature(((PointMagneticData(g, F), area),))
    oracle = 2.0 * (genus - 1) * math.fsum(evaluate(phi, (2 * j + 1) / R**2) for j in range(40))
    assert_allclose(integrate_f0(q, phi), oracle, rtol=1e-12)


def test_integrate_f0_rejects_mixed_rank():
    phi = TestFunction("gaussian", mu=1.0, sigma=1.0)
    zero_field = PointMagneticData(np.eye(2), np.zeros((2, 2)))
    q = ManifoldQuadrature(((torus_point(), 0.5), (zero_field, 0.5)))
    with pytest.raises(ValueError, match="mixed rank"):
        integrate_f0(q, phi)


def test_quadrature_weight_invariant():
    with pytest.raises(ValueError):
        ManifoldQuadrature(((torus_point(), 1.0),), total_volume=2.0)
    with pytest.raises(ValueError):
        ManifoldQuadrature(((torus_point(), -1.0),))


def test_torus_quadrature_variable_field():
    f = lambda x, y: 1.0 + 0.3 * math.cos(TWO_PI * x)
    q = torus_quadrature(8, field_fn=f)
    assert len(q.nodes) == 64
    assert_allclose(q.total_volume, 1.0, rtol=1e-14)
    fr = magnetic_frequencies(q.nodes[0][0])
    x0 = 0.5 / 8
    assert_allclose(fr.a, [TWO_PI * f(x0, x0)], rtol=1e-13)


def test_point_data_validation():
    with pytest.raises(ValueError):
        PointMagneticData(np.array([[1.0, 0.5], [0.2, 1.0]]), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        PointMagneticData(-np.eye(2), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        PointMagneticData(np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_quadrature_csv_roundtrip():
    q = sphere_quadrature(2.0, n_theta=4, n_phi=3)
    text = quadrature_to_csv(q)
    back = quadrature_from_csv(text)
    assert len(back.nodes) == len(q.nodes)
    for (p1, w1), (p2, w2) in zip(q.nodes, back.nodes):
        assert_allclose(p1.g, p2.g, rtol=0, atol=0)
        assert_allclose(p1.F, p2.F, rtol=0, atol=0)
        assert p1.V == p2.V and w1 == w2
    phi = TestFunction("gaussian", mu=0.2, sigma=0.3)
    assert_allclose(integrate_f0(back, phi), integrate_f0(q, phi), rtol=1e-14)
