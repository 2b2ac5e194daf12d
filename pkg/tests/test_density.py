import math

import pytest
from numpy.testing import assert_allclose

from magtrace.density import density_curve, smoothed_density
from magtrace.probes import TestFunction, evaluate
from magtrace.spectra import ModelSystem, leading_coefficient

TWO_PI = 2.0 * math.pi


def test_torus2_exact_identity():
    # Y_N = N * sum_j phi(2pi(2j+1)) exactly, floating point only
    phi = TestFunction("gaussian", mu=TWO_PI, sigma=1.0)
    S = math.fsum(evaluate(phi, TWO_PI * (2 * j + 1)) for j in range(20))
    for N in (1, 5, 17, 40):
        d = smoothed_density(ModelSystem("torus2"), N, phi)
        assert abs(d.value - N * S) / (N * S) < 1e-12
    assert_allclose(smoothed_density(ModelSystem("torus2"), 5, phi).value, 5.0, rtol=1e-12)


def test_sphere_direct_summation_oracle():
    phi = TestFunction("gaussian", mu=1.5, sigma=0.5)
    N = 10
    oracle = math.fsum(
        (N + 2 * j + 1) * evaluate(phi, j * (j + 1) / N + 0.5 * (2 * j + 1))
        for j in range(100)
    )
    d = smoothed_density(ModelSystem("sphere", R=1.0), N, phi)
    assert_allclose(d.value, oracle, rtol=1e-13)
    assert d.tail_bound < 1e-12


def test_probe_missing_spectrum_gives_zero():
    phi = TestFunction("gaussian", mu=-10.0, sigma=0.1)
    for variant in ("torus2", "torus3", "sphere", "hyperbolic"):
        d = smoothed_density(ModelSystem(variant), 7, phi)
        assert abs(d.value) < 1e-15


def test_torus2_proportional_to_N():
    phi = TestFunction("gaussian", mu=TWO_PI, sigma=1.0)
    values = density_curve(ModelSystem("torus2"), phi, [1, 2, 3])
    assert_allclose([v.value for v in values], [values[0].value * n for n in (1, 2, 3)], rtol=1e-13)


def test_torus3_residual_decreases():
    phi = TestFunction("gaussian", mu=TWO_PI, sigma=6.0)
    model = ModelSystem("torus3")
    f0 = leading_coefficient(model, phi)
    res = []
    for N in (25, 100):
        d = smoothed_density(model, N, phi)
        res.append(abs(d.value - f0 * N**1.5) / N**1.5)
    assert res[1] < res[0]


def test_refinement_consistency():
    phi = TestFunction("gaussian", mu=4.0, sigma=1.0)
    model = ModelSystem("sphere", R=1.2)
    coarse = smoothed_density(model, 12, phi, tol=1e-6)
    fine = smoothed_density(model, 12, phi, tol=5e-7)
    assert abs(fine.value - coarse.value) <= coarse.tail_bound
    strict = smoothed_density(model, 12, phi, tol=1e-14)
    assert abs(strict.value - coarse.value) <= coarse.tail_bound


def test_hyperbolic_continuous_bound_is_negligible():
    phi = TestFunction("gaussian", mu=1.0, sigma=0.3)
    model = ModelSystem("hyperbolic", R=1.0, genus=2)
    for N in (10, 16, 32):
        d = smoothed_density(model, N, phi)
        assert d.continuous_part_bound < 1e-10 * d.value
        assert d.tail_bound == 0.0  # all discrete lines are summed


def test_density_curve_validation():
    phi = TestFunction("gaussian", mu=1.0, sigma=1.0)
    with pytest.raises(ValueError):
        density_curve(ModelSystem("torus2"), phi, [])
    with pytest.raises(ValueError):
        smoothed_density(ModelSystem("torus2"), 3, phi, tol=0.0)


def test_density_curve_sorted_output():
    phi = TestFunction("gaussian", mu=TWO_PI, sigma=1.0)
    out = density_curve(ModelSystem("torus2"), phi, [7, 3, 5])
    assert [v.N for v in out] == [3, 5, 7]
