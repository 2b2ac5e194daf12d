"""Exact eigenvalue/multiplicity lists for four constant-curvature magnetic systems.

All four models carry a constant magnetic field and admit closed-form spectra
for the Bochner-Schrodinger operator H_N (here always with V = 0):

    torus2      nu = 2 pi N (2j+1),                  mult N,            j >= 0
    torus3      nu = 2 pi N (2j+1) + (2 pi k)^2,     mult N,            j >= 0, k in Z
    sphere      nu = [j(j+1) + (N/2)(2j+1)] / R^2,   mult N + 2j + 1,   j >= 0
    hyperbolic  nu = [(2j+1)N - j(j+1)] / R^2,       mult (g-1)(2N-2j-1), 0 <= j <= N-1

The hyperbolic surface additionally has continuous-type spectrum above
N^2/R^2 built from the Laplace eigenvalues of the surface; those have no
closed form and are only represented here through the threshold value, so
that downstream consumers can certify the probe mass beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .probes import TestFunction, evaluate, evaluate_derivative

MERGE_REL_TOL = 1e-12  # coinciding torus3 lines are merged within this relative slack


@dataclass(frozen=True)
class SpectralLine:
    nu: float
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be a positive integer")
        if self.nu < 0:
            raise ValueError("eigenvalues of these models are nonnegative")


@dataclass(frozen=True)
class ModelSystem:
    """One of the four closed-form systems.

    variant: 'torus2', 'torus3', 'sphere' or 'hyperbolic'.  The radius R
    applies to sphere/hyperbolic; genus (>= 2) only to hyperbolic.
    """

    variant: str
    R: float = 1.0
    genus: int = 2

    def __post_init__(self):
        if self.variant not in ("torus2", "torus3", "sphere", "hyperbolic"):
            raise ValueError(f"unknown model variant {self.variant!r}")
        if self.R <= 0:
            raise ValueError("R must be positive")
        if self.variant == "hyperbolic" and self.genus < 2:
            raise ValueError("hyperbolic genus must be >= 2")

    @property
    def dim(self) -> int:
        return 3 if self.variant == "torus3" else 2

    def landau_spacing(self) -> float:
        """Frequency a_1 of the constant field: 2pi (tori), 1/(2R^2) (sphere), 1/R^2 (hyperbolic)."""
        if self.variant in ("torus2", "torus3"):
            return 2.0 * math.pi
        if self.variant == "sphere":
            return 0.5 / self.R**2
        return 1.0 / self.R**2

    def continuous_threshold(self, N: int) -> Optional[float]:
        """Rescaled onset nu/N of the hyperbolic continuous part, else None."""
        if self.variant == "hyperbolic":
            return N / self.R**2
        return None


def spectrum(model: ModelSystem, N: int, cutoff: float) -> list:
    """All SpectralLines with nu/N <= cutoff, ascending in nu.

    torus3 lines coming from (j, k) and (j, -k) are merged (multiplicity 2N
    for k != 0); accidental collisions across different j are merged within
    MERGE_REL_TOL.  For the hyperbolic model only the discrete part below
    N^2/R^2 is produced.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    lines = []
    if model.variant == "torus2":
        j = 0
        while 2.0 * math.pi * (2 * j + 1) <= cutoff:
            lines.append(SpectralLine(2.0 * math.pi * N * (2 * j + 1), N))
            j += 1
    elif model.variant == "torus3":
        raw = []
        j = 0
        while 2.0 * math.pi * (2 * j + 1) <= cutoff:
            base = 2.0 * math.pi * N * (2 * j + 1)
            k = 0
            while base + (2.0 * math.pi * k) ** 2 <= cutoff * N:
                raw.append((base + (2.0 * math.pi * k) ** 2, N if k == 0 else 2 * N))
                k += 1
            j += 1
        raw.sort()
        for nu, m in raw:
            if lines and abs(nu - lines[-1].nu) <= MERGE_REL_TOL * max(nu, 1.0):
                lines[-1] = SpectralLine(lines[-1].nu, lines[-1].multiplicity + m)
            else:
                lines.append(SpectralLine(nu, m))
    elif model.variant == "sphere":
        j = 0
        while True:
            nu = (j * (j + 1) + 0.5 * N * (2 * j + 1)) / model.R**2
            if nu > cutoff * N:
                break
            lines.append(SpectralLine(nu, N + 2 * j + 1))
            j += 1
    else:  # hyperbolic, discrete part only
        for j in range(N):
            nu = ((2 * j + 1) * N - j * (j + 1)) / model.R**2
            if nu <= cutoff * N:
                lines.append(SpectralLine(nu, (model.genus - 1) * (2 * N - 2 * j - 1)))
        lines.sort(key=lambda line: line.nu)
    return lines


def leading_coefficient(model: ModelSystem, phi: TestFunction, jmax: int = 100000) -> float:
    """Closed-form f0 of the N -> infinity expansion of Y_N, per model.

    torus2/sphere: sum_j phi((2j+1) a_1); hyperbolic: 2(g-1) sum_j phi((2j+1)/R^2);
    torus3: (1/2pi) sum_j int_R phi(xi^2 + 2pi(2j+1)) dxi.
    """
    a = model.landau_spacing()
    limit = phi.mu + 14.0 * phi.sigma * (1 + phi.degree)
    terms = []
    if model.variant == "torus3":
        from scipy.integrate import quad

        j = 0
        while 2.0 * math.pi * (2 * j + 1) <= limit and j < jmax:
            c = 2.0 * math.pi * (2 * j + 1)
            val, _ = quad(
                lambda u: evaluate(phi, c + u * u), 0.0, math.sqrt(max(limit - c, 1.0)),
                epsabs=1e-15, epsrel=1e-14, limit=300,
            )
            terms.append(2.0 * val)
            j += 1
        return math.fsum(terms) / (2.0 * math.pi)
    factor = 2.0 * (model.genus - 1) if model.variant == "hyperbolic" else 1.0
    j = 0
    while a * (2 * j + 1) <= limit and j < jmax:
        terms.append(evaluate(phi, a * (2 * j + 1)))
        j += 1
    return factor * math.fsum(terms)


def subleading_coefficient(model: ModelSystem, phi: TestFunction) -> float:
    """Closed-form f1 (coefficient of N^0) for the sphere and hyperbolic models.

    sphere:      f1 =  (1/R^2) sum phi'(L_j) j(j+1) + sum phi(L_j) (2j+1)
    hyperbolic:  f1 = -(g-1) [ (2/R^2) sum phi'(L_j) j(j+1) + sum phi(L_j) (2j+1) ]

    with L_j the rescaled Landau levels of the model.  Both follow from the
    first-order Taylor term of the exact eigenvalue lists.
    """
    a = model.landau_spacing()
    limit = phi.mu + 14.0 * phi.sigma * (1 + phi.degree)
    t_deriv = []
    t_plain = []
    j = 0
    while a * (2 * j + 1) <= limit:
        lam = a * (2 * j + 1)
        t_deriv.append(evaluate_derivative(phi, 1, lam) * j * (j + 1))
        t_plain.append(evaluate(phi, lam) * (2 * j + 1))
        j += 1
    if model.variant == "sphere":
        return math.fsum(t_deriv) / model.R**2 + math.fsum(t_plain)
    if model.variant == "hyperbolic":
        g = model.genus
        return -(g - 1) * (2.0 / model.R**2 * math.fsum(t_deriv) + math.fsum(t_plain))
    raise ValueError("subleading coefficient is implemented for sphere and hyperbolic only")


def leading_power(model: ModelSystem) -> float:
    """Growth exponent of Y_N: d/2 in general, here 1 except 3/2 for torus3."""
    return 1.5 if model.variant == "torus3" else 1.0


def model_quadrature(model: ModelSystem):
    """Single-node quadrature of the model's constant-coefficient data.

    All four models have position-independent frequencies, so one node with
    the full Riemannian volume as weight integrates f0 (and the Demailly
    limit) exactly.  Volumes: 1 (tori), 4 pi R^2 (sphere),
    4 pi (genus-1) R^2 (hyperbolic, by Gauss-Bonnet at curvature -1/R^2).
    """
    import numpy as np

    from .geometry import ManifoldQuadrature, PointMagneticData

    if model.variant == "torus2":
        F = np.array([[0.0, 2.0 * math.pi], [-2.0 * math.pi, 0.0]])
        node = PointMagneticData(np.eye(2), F, 0.0)
        weight = 1.0
    elif model.variant == "torus3":
        F = np.zeros((3, 3))
        F[0, 1], F[1, 0] = 2.0 * math.pi, -2.0 * math.pi
        node = PointMagneticData(np.eye(3), F, 0.0)
        weight = 1.0
    elif model.variant == "sphere":
        theta = 0.5 * math.pi  # any colatitude gives the same frequencies
        g = np.diag([model.R**2, (model.R * math.sin(theta)) ** 2])
        F = np.array([[0.0, 0.5 * math.sin(theta)], [-0.5 * math.sin(theta), 0.0]])
        node = PointMagneticData(g, F, 0.0)
        weight = 4.0 * math.pi * model.R**2
    else:
        y = 1.0  # upper half-plane chart point
        g = (model.R**2 / y**2) * np.eye(2)
        F = np.array([[0.0, 1.0 / y**2], [-1.0 / y**2, 0.0]])
        node = PointMagneticData(g, F, 0.0)
        weight = 4.0 * math.pi * (model.genus - 1) * model.R**2
    return ManifoldQuadrature(((node, weight),))


def parse_model(text: str) -> ModelSystem:
    """Parse 'torus2', 'sphere:R=2', 'hyperbolic:R=1,genus=3', ..."""
    name, _, rest = text.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            key = key.strip()
            if key == "R":
                params["R"] = float(val)
            elif key == "genus":
                params["genus"] = int(val)
            else:
                raise ValueError(f"unknown model parameter {key!r}")
    return ModelSystem(name.strip(), **params)
