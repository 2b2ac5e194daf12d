"""Schwartz-class probe functions with analytic derivatives and Fourier transforms.

A probe is a (possibly Hermite-weighted) Gaussian

    phi(lam) = He_deg(x) exp(-x^2/2),   x = (lam - mu)/sigma,

where He_k is the probabilists' Hermite polynomial (He_0 = 1 recovers the
plain Gaussian).  The Fourier transform uses the convention

    phihat(k) = int phi(lam) exp(-i k lam) dlam,

so a plain Gaussian gives phihat(k) = sigma*sqrt(2*pi)*exp(-i mu k - sigma^2 k^2 / 2).
Gaussians are used instead of compactly supported bump functions because the
super-exponential decay of both phi and phihat makes every truncation error
certifiable in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

KINDS = ("gaussian", "hermite_gaussian")

MAX_DERIVATIVE_ORDER = 8


@dataclass(frozen=True)
class TestFunction:
    """Probe phi with center ``mu``, width ``sigma > 0`` and Hermite degree."""

    __test__ = False  # not a pytest class, despite the name

    kind: str = "gaussian"
    mu: float = 0.0
    sigma: float = 1.0
    degree: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown probe kind {self.kind!r}")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.degree < 0 or (self.kind == "gaussian" and self.degree != 0):
            raise ValueError("degree must be 0 for plain gaussian, >= 0 otherwise")

    def __call__(self, lam):
        return evaluate(self, lam)


def _hermite_he(n, x):
    """Probabilists' Hermite polynomial He_n(x), by the three-term recursion."""
    h_prev = np.ones_like(np.asarray(x, dtype=float))
    if n == 0:
        return h_prev
    h = np.asarray(x, dtype=float)
    for k in range(1, n):
        h, h_prev = x * h - k * h_prev, h
    return h


def evaluate(phi: TestFunction, lam):
    """phi(lam); accepts scalars or arrays."""
    x = (np.asarray(lam, dtype=float) - phi.mu) / phi.sigma
    val = _hermite_he(phi.degree, x) * np.exp(-0.5 * x * x)
    return val if val.ndim else float(val)


def evaluate_derivative(phi: TestFunction, order: int, lam):
    """Analytic derivative phi^(order)(lam).

    Uses d^n/dx^n [He_d(x) e^{-x^2/2}] = (-1)^n He_{d+n}(x) e^{-x^2/2},
    so no finite differencing is involved.  Orders above
    ``MAX_DERIVATIVE_ORDER`` are rejected.
    """
    if order < 0 or order > MAX_DERIVATIVE_ORDER:
        raise ValueError(f"derivative order must be in [0, {MAX_DERIVATIVE_ORDER}]")
    x = (np.asarray(lam, dtype=float) - phi.mu) / phi.sigma
    sign = -1.0 if order % 2 else 1.0
    val = sign * _hermite_he(phi.degree + order, x) * np.exp(-0.5 * x * x) / phi.sigma**order
    return val if val.ndim else float(val)


def fourier_transform(phi: TestFunction, k):
    """phihat(k) = int phi(lam) e^{-i k lam} dlam, in closed form.

    By the Rodrigues formula He_d(x)e^{-x^2/2} = (-1)^d (d/dx)^d e^{-x^2/2},
    so the transform of the Hermite-weighted Gaussian is
    sqrt(2*pi) (-i t)^d e^{-t^2/2} in the unit-width variable.
    """
    t = phi.sigma * np.asarray(k, dtype=float)
    val = (
        phi.sigma
        * math.sqrt(2.0 * math.pi)
        * (-1j * t) ** phi.degree
        * np.exp(-1j * phi.mu * np.asarray(k, dtype=float) - 0.5 * t * t)
    )
    return val if np.ndim(val) else complex(val)


def fourier_window(phi: TestFunction, floor: float = 1e-18) -> float:
    """Smallest T with |phihat(t)| < floor for all |t| >= T."""
    # |phihat| <= sigma*sqrt(2pi)*(1+|sigma t|)^deg * exp(-sigma^2 t^2/2); solve by iteration
    amp = phi.sigma * math.sqrt(2.0 * math.pi)
    t = 1.0
    for _ in range(100):
        decay = 0.5 * (phi.sigma * t) ** 2 - phi.degree * math.log1p(phi.sigma * t)
        if decay >= math.log(amp / floor):
            return t
        t *= 1.25
    raise RuntimeError("could not locate Fourier decay window")


def _cramer_const(degree: int) -> float:
    # |He_d(x)| <= 1.09*sqrt(d!)*exp(x^2/4)  (Cramer's bound); exact 1 for d = 0
    return 1.0 if degree == 0 else 1.09 * math.sqrt(math.factorial(degree))


def envelope(phi: TestFunction, lam: float) -> float:
    """Monotone-decreasing majorant of |phi| on [lam, infinity).

    Plain Gaussian: exp(-x^2/2) past the center, 1 before it.  Hermite kinds
    use Cramer's bound |He_d(x)| e^{-x^2/2} <= 1.09 sqrt(d!) e^{-x^2/4}.
    """
    x = max((lam - phi.mu) / phi.sigma, 0.0)
    rate = 0.5 if phi.degree == 0 else 0.25
    return _cramer_const(phi.degree) * math.exp(-rate * x * x)


def envelope_integral(phi: TestFunction, lam: float) -> float:
    """Upper bound on int_lam^inf |phi(u)| du, via the same majorant."""
    from scipy.special import erfc

    x = (lam - phi.mu) / phi.sigma
    rate = 0.5 if phi.degree == 0 else 0.25
    xr = max(x, 0.0) * math.sqrt(rate)
    tail = math.sqrt(math.pi / (4.0 * rate)) * float(erfc(xr))
    head = max(-x, 0.0)  # flat majorant between lam and the center
    return phi.sigma * _cramer_const(phi.degree) * (head + tail) * (1.0 + 1e-9)


def parse_probe(text: str) -> TestFunction:
    """Parse ``kind:key=val,...`` e.g. ``gaussian:mu=6.2832,sigma=1``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    if kind not in KINDS:
        raise ValueError(f"unknown probe kind {kind!r}")
    params = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in ("mu", "sigma", "degree"):
                raise ValueError(f"unknown probe parameter {key!r}")
            params[key] = int(val) if key == "degree" else float(val)
    return TestFunction(kind=kind, **params)
