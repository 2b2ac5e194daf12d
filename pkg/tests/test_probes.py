import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from magtrace.probes import (
    TestFunction,
    envelope,
    envelope_integral,
    evaluate,
    evaluate_derivative,
    fourier_transform,
    fourier_window,
    parse_probe,
)


def quadrature_fourier(phi, k):
    """Independent oracle: direct quadrature of int phi(lam) e^{-i k lam} dlam."""
    # |phi| <= 1.09 sqrt(deg!) e^{-x^2/4} (Cramer), so 15 widths suffice for any degree
    lo = phi.mu - 15 * phi.sigma
    hi = phi.mu + 15 * phi.sigma
    if k == 0:
        re, _ = quad(lambda l: evaluate(phi, l), lo, hi, limit=500, epsabs=1e-14)
        return complex(re)
    re, _ = quad(lambda l: evaluate(phi, l), lo, hi, weight="cos", wvar=k, limit=500, epsabs=1e-14)
    im, _ = quad(lambda l: evaluate(phi, l), lo, hi, weight="sin", wvar=k, limit=500, epsabs=1e-14)
    return re - 1j * im


def test_eval_peak_values():
    assert evaluate(TestFunction("gaussian", mu=0.0, sigma=1.0), 0.0) == 1.0
    assert evaluate(TestFunction("gaussian", mu=2 * math.pi, sigma=1.0), 2 * math.pi) == 1.0
    assert_allclose(
        evaluate(TestFunction("gaussian", mu=1.5, sigma=0.5), 0.5), math.exp(-2), rtol=1e-15
    )


def test_eval_decay_invariant():
    phi = TestFunction("gaussian", mu=0.3, sigma=0.7)
    for side in (-1, 1):
        assert abs(evaluate(phi, phi.mu + side * 10 * phi.sigma)) < 1e-20 * evaluate(phi, phi.mu)


def test_derivative_examples():
    phi = TestFunction("gaussian", mu=0.0, sigma=1.0)
    assert evaluate_derivative(phi, 1, 0.0) == 0.0
    assert_allclose(evaluate_derivative(phi, 2, 0.0), -1.0, rtol=1e-15)
    assert_allclose(evaluate_derivative(phi, 1, 1.0), -math.exp(-0.5), rtol=1e-15)


def test_derivative_order_limit():
    phi = TestFunction("gaussian")
    with pytest.raises(ValueError):
        evaluate_derivative(phi, 9, 0.0)


@pytest.mark.parametrize("phi", [
    TestFunction("gaussian", mu=0.5, sigma=1.3),
    TestFunction("hermite_gaussian", mu=-1.0, sigma=0.8, degree=3),
])
def test_derivatives_match_finite_differences(phi):
    rng = np.random.default_rng(7)
    lams = rng.uniform(phi.mu - 3 * phi.sigma, phi.mu + 3 * phi.sigma, size=100)
    step = 1e-5
    for order in range(1, 5):
        lower = evaluate_derivative(phi, order - 1, lams - step)
        upper = evaluate_derivative(phi, order - 1, lams + step)
        fd = (upper - lower) / (2 * step)
        exact = evaluate_derivative(phi, order, lams)
        scale = np.max(np.abs(exact)) + 1e-12
        assert np.max(np.abs(fd - exact)) / scale < 1e-6


def test_fourier_at_zero_is_total_integral():
    phi = TestFunction("gaussian", mu=0.0, sigma=1.0)
    assert_allclose(fourier_transform(phi, 0.0), math.sqrt(2 * math.pi), rtol=1e-12)
    total, _ = quad(lambda l: evaluate(phi, l), -30, 30, epsabs=1e-14)
    assert_allclose(fourier_transform(phi, 0.0).real, total, rtol=1e-10)


def test_fourier_modulus_decay():
    phi = TestFunction("gaussian", mu=0.0, sigma=1.0)
    for k in (5.0, 10.0, 15.0):
        assert_allclose(abs(fourier_transform(phi, k)), math.sqrt(2 * math.pi) * math.exp(-k * k / 2), rtol=1e-12)


def test_fourier_example_against_quadrature_oracle():
    # frozen from the quadrature oracle: -0.018027378167562. .. + ~0j
    phi = TestFunction("gaussian", mu=1.0, sigma=1.0)
    got = fourier_transform(phi, math.pi)
    assert_allclose(got.real, -0.01802737816756253, atol=1e-13)
    assert abs(got.imag) < 1e-13
    assert abs(got - quadrature_fourier(phi, math.pi)) < 1e-12


@pytest.mark.parametrize("phi", [
    TestFunction("gaussian", mu=0.0, sigma=1.0),
    TestFunction("gaussian", mu=2.5, sigma=0.5),
    TestFunction("hermite_gaussian", mu=0.5, sigma=1.2, degree=2),
    TestFunction("hermite_gaussian", mu=-1.0, sigma=0.9, degree=5),
])
def test_fourier_matches_quadrature_up_to_k20(phi):
    for k in np.linspace(-20, 20, 17):
        assert abs(fourier_transform(phi, k) - quadrature_fourier(phi, k)) < 1e-10


def test_fourier_conjugate_symmetry():
    phi = TestFunction("hermite_gaussian", mu=1.0, sigma=2.0, degree=4)
    for k in (0.3, 1.7, 9.1):
        assert_allclose(fourier_transform(phi, -k), np.conj(fourier_transform(phi, k)), rtol=1e-12)


def test_envelope_majorizes_and_decreases():
    rng = np.random.default_rng(11)
    for phi in (TestFunction("gaussian", mu=1.0, sigma=0.7),
                TestFunction("hermite_gaussian", mu=0.0, sigma=1.0, degree=4)):
        lams = np.sort(rng.uniform(phi.mu, phi.mu + 12 * phi.sigma, size=50))
        envs = np.array([envelope(phi, l) for l in lams])
        assert np.all(np.diff(envs) <= 1e-15)
        # majorant of everything to the right
        for l, e in zip(lams, envs):
            probe_pts = np.linspace(l, l + 15 * phi.sigma, 200)
            assert np.all(np.abs(evaluate(phi, probe_pts)) <= e + 1e-300)


def test_envelope_integral_bounds_tail():
    phi = TestFunction("gaussian", mu=2.0, sigma=1.5)
    for lam in (2.0, 4.0, 8.0):
        direct, _ = quad(lambda u: abs(evaluate(phi, u)), lam, lam + 40, epsabs=1e-14)
        assert envelope_integral(phi, lam) >= direct


def test_fourier_window_is_below_floor():
    phi = TestFunction("gaussian", mu=3.0, sigma=0.5)
    T = fourier_window(phi)
    assert abs(fourier_transform(phi, T)) < 1e-18
    assert abs(fourier_transform(phi, -T)) < 1e-18


def test_parse_probe():
    phi = parse_probe("gaussian:mu=6.2832,sigma=1")
    assert phi.kind == "gaussian" and phi.mu == 6.2832 and phi.sigma == 1.0
    phi = parse_probe("hermite_gaussian:mu=0,sigma=2,degree=3")
    assert phi.degree == 3
    with pytest.raises(ValueError):
        parse_probe("lorentzian:gamma=1")
    with pytest.raises(ValueError):
        parse_probe("gaussian:width=1")


def test_invalid_probe_parameters():
    with pytest.raises(ValueError):
        TestFunction("gaussian", sigma=0.0)
    with pytest.raises(ValueError):
        TestFunction("gaussian", degree=2)
