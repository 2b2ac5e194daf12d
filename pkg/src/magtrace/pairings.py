"""Distributional sin-pairings: closed Landau-sum forms and their
epsilon-regularized oscillatory-integral definitions.

The object is the tempered distribution

    D(t) = e^{i V t} / ( (t+i0)^ell * prod_j sin(c_j (t+i0)) ),

paired against phihat as (1/2pi) <D, phihat>.  Three routes are provided:

* ``sin_sum`` (ell = 0): the exact ladder sum
      (-2i)^m sum_{k in Z_+^m} phi( sum_j (2k_j+1) c_j + V ).
* ``half_power_pairing`` (ell > 0): the half-power integral form
      (2^m e^{3 pi i (ell+m)/2} / pi^ell) sum_k int_{R^{2 ell}}
          phi(|xi|^2 + beta_k + V) dxi,
  which reduces each term to a smooth one-dimensional integral.
* ``regularized_pairing``: direct quadrature of the integral at finite
  epsilon followed by Richardson extrapolation epsilon -> 0.

The phase convention of the closed forms fixes the branch of (t+i eps)^ell:
the regularized integrand uses arg(t + i eps) - 2 pi, i.e. the closed forms
are normative and the integral is made to agree with them (for integer ell
the choice is immaterial).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from ._shells import certified_shell_sum
from .fitting import richardson
from .geometry import ManifoldQuadrature, _radial_integral, _radial_term_bound, magnetic_frequencies
from .probes import TestFunction, envelope, evaluate, fourier_transform, fourier_window

DEFAULT_EPS_SCHEDULE = (0.2, 0.1, 0.05, 0.025, 0.0125)


class ExtrapolationError(RuntimeError):
    """Richardson extrapolation of I(eps) did not converge; carries the table."""

    def __init__(self, message, eps_table):
        super().__init__(message)
        self.eps_table = eps_table


@dataclass(frozen=True)
class PairingSpec:
    """Frequencies c_j > 0, half-integer power ell >= 0 and phase shift V."""

    c: tuple
    ell: float = 0.0
    V: float = 0.0

    def __post_init__(self):
        c = tuple(float(x) for x in self.c)
        object.__setattr__(self, "c", c)
        if not c or any(x <= 0 for x in c):
            raise ValueError("need at least one positive sin frequency")
        two_ell = 2.0 * self.ell
        if self.ell < 0 or abs(two_ell - round(two_ell)) > 1e-12:
            raise ValueError("ell must be a nonnegative half-integer")

    @property
    def m(self) -> int:
        return len(self.c)


def sin_sum(spec: PairingSpec, phi: TestFunction, tol: float = 1e-12) -> complex:
    """Ladder-sum value of the pairing for ell = 0."""
    if spec.ell != 0:
        raise ValueError("sin_sum requires ell = 0")
    value, _tail = certified_shell_sum(
        spec.c,
        lambda beta: evaluate(phi, beta + spec.V),
        lambda beta: envelope(phi, beta + spec.V),
        tol,
        phi.mu + 2.0 * phi.sigma * (1 + phi.degree) - spec.V,
    )
    return (-2j) ** spec.m * value


def half_power_pairing(spec: PairingSpec, phi: TestFunction, tol: float = 1e-12) -> complex:
    """Half-power integral value of the pairing for ell > 0."""
    if spec.ell <= 0:
        raise ValueError("half_power_pairing requires ell > 0")
    m_xi = 2.0 * spec.ell  # the xi-integral runs over R^{2 ell}
    value, _tail = certified_shell_sum(
        spec.c,
        lambda beta: _radial_integral(phi, m_xi, beta + spec.V, tol),
        lambda beta: _radial_term_bound(phi, m_xi, beta + spec.V),
        tol,
        phi.mu + 2.0 * phi.sigma * (1 + phi.degree) - spec.V,
    )
    prefactor = 2.0**spec.m * np.exp(3j * math.pi * (spec.ell + spec.m) / 2.0) / math.pi**spec.ell
    return complex(prefactor * value)


def closed_form_pairing(spec: PairingSpec, phi: TestFunction, tol: float = 1e-12) -> complex:
    return sin_sum(spec, phi, tol) if spec.ell == 0 else half_power_pairing(spec, phi, tol)


def _branch_power(z, ell):
    # z^{-ell} with arg z taken in (-2pi, -pi) for Im z > 0; this reproduces the
    # e^{3 pi i (ell+m)/2} phases of the closed forms (principal arg would flip
    # the sign for half-integer ell).
    return np.exp(-ell * (np.log(np.abs(z)) + 1j * (np.angle(z) - 2.0 * math.pi)))


def _integrand(t, eps, spec, phi):
    z = t + 1j * eps
    val = fourier_transform(phi, t) * np.exp(1j * spec.V * z)
    if spec.ell > 0:
        val = val * _branch_power(z, spec.ell)
    for c in spec.c:
        val = val / np.sin(c * z)
    return val


def pairing_integral(spec: PairingSpec, phi: TestFunction, eps: float) -> complex:
    """I(eps) = (1/2pi) int phihat(t) e^{iV(t+i eps)} / ((t+i eps)^ell prod sin(c_j (t+i eps))) dt.

    The window covers |phihat| down to 1e-18.  The integrand peaks within
    O(eps) of the real sin zeros t = k pi / c_j (and of t = 0 for ell > 0),
    so the quadrature gets breakpoints at every pole plus a geometrically
    graded cluster of offsets around each.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    window = fourier_window(phi)
    poles = {0.0} if spec.ell > 0 else set()
    for c in spec.c:
        spacing = math.pi / c
        k = 0
        while k * spacing <= window:
            poles.update((k * spacing, -k * spacing))
            k += 1
    min_spacing = min(math.pi / c for c in spec.c)
    points = set()
    for p in poles:
        points.add(p)
        offset = eps
        while offset < 0.5 * min_spacing:
            points.update((p - offset, p + offset))
            offset *= 3.0
    points = sorted(q for q in points if -window < q < window)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        re, _ = quad(
            lambda t: _integrand(t, eps, spec, phi).real,
            -window, window, points=points, limit=10 * len(points) + 400,
            epsabs=1e-13, epsrel=1e-13,
        )
        im, _ = quad(
            lambda t: _integrand(t, eps, spec, phi).imag,
            -window, window, points=points, limit=10 * len(points) + 400,
            epsabs=1e-13, epsrel=1e-13,
        )
    return (re + 1j * im) / (2.0 * math.pi)


@dataclass(frozen=True)
class RegularizedPairing:
    value: complex
    error_estimate: float
    eps_table: tuple  # ((eps, I(eps)), ...) as evaluated


def regularized_pairing(spec: PairingSpec, phi: TestFunction, eps_schedule=DEFAULT_EPS_SCHEDULE) -> RegularizedPairing:
    """Extrapolate the regularized integrals I(eps) to eps -> 0.

    I(eps) is analytic in eps >= 0 for Schwartz probes, so polynomial
    Richardson of order len(schedule) - 1 applies.  Fails loudly (with the
    I(eps) table attached) when the extrapolation disagrees with itself by
    more than 1e-3 of the value.
    """
    schedule = tuple(float(e) for e in eps_schedule)
    if len(schedule) < 3:
        raise ValueError("eps_schedule needs at least 3 entries")
    if any(e2 >= e1 for e1, e2 in zip(schedule, schedule[1:])) or schedule[-1] <= 0:
        raise ValueError("eps_schedule must be positive and strictly descending")
    table = tuple((eps, pairing_integral(spec, phi, eps)) for eps in schedule)
    result = richardson(table, order=len(schedule) - 1)
    scale = max(abs(result.limit), 1e-9)
    if result.error_estimate > 1e-3 * scale:
        raise ExtrapolationError(
            f"extrapolation error {result.error_estimate:.3g} exceeds 1e-3 of |value| {scale:.3g}",
            table,
        )
    return RegularizedPairing(result.limit, result.error_estimate, table)


def khuat_duy_c0(nodes, d: int, q: int, phi: TestFunction, tol: float = 1e-12) -> float:
    """Critical-level Weyl coefficient for a Hessian-frequency quadrature.

    ``nodes`` is a sequence of (alphas, weight): Hessian frequencies
    alpha_1..alpha_{q-d} at a critical point and its measure weight.  Returns

        (2 pi)^{-(2d-q)} sum_k sum_nodes w *
            int_{R^{2d-q}} phi(|xi|^2 / 2 + beta_k) dxi,

    with beta_k = sum_j (k_j + 1/2) alpha_j.  Here d is the configuration
    dimension and q the codimension of the critical manifold in phase space
    (2d - q = its dimension, q - d = number of frequency pairs).
    """
    if 2 * d - q < 0:
        raise ValueError("need 2d - q >= 0")
    m_xi = 2 * d - q
    total = []
    for alphas, weight in nodes:
        alphas = tuple(float(a) for a in alphas)
        if len(alphas) != q - d:
            raise ValueError(f"node has {len(alphas)} frequencies, expected q - d = {q - d}")
        # beta_k = sum (k_j + 1/2) alpha_j = sum (2 k_j + 1) (alpha_j / 2)
        half = tuple(0.5 * a for a in alphas)
        # |xi|^2/2 + beta = |eta|^2 + beta after xi = sqrt(2) eta, picking up 2^{m/2}
        scale = 2.0 ** (m_xi / 2.0)

        def term(beta):
            if m_xi == 0:
                return evaluate(phi, beta)
            return scale * _radial_integral(phi, m_xi, beta, tol)

        def term_bound(beta):
            if m_xi == 0:
                return envelope(phi, beta)
            return scale * _radial_term_bound(phi, m_xi, beta)

        value, _tail = certified_shell_sum(
            half, term, term_bound, tol, phi.mu + 2.0 * phi.sigma * (1 + phi.degree)
        )
        total.append(weight * value)
    return (2.0 * math.pi) ** (-m_xi) * math.fsum(total)


def hessian_nodes_from_magnetic(quadrature: ManifoldQuadrature):
    """Convert a maximal-rank magnetic quadrature to Hessian-frequency nodes.

    The critical Hessian frequencies are alpha_j = 2 a_j, and matching the
    local density requires reweighting by prod(a_j) / (2 pi)^n.  Only valid
    when d = 2n at every node.
    """
    nodes = []
    for point, w in quadrature.nodes:
        fr = magnetic_frequencies(point)
        if point.dim != fr.rank2n:
            raise ValueError("Hessian-node conversion requires maximal rank d = 2n")
        factor = math.prod(fr.a) / (2.0 * math.pi) ** fr.n
        nodes.append((tuple(2.0 * a for a in fr.a), w * factor))
    return nodes
