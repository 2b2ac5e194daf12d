"""Pointwise magnetic data and the leading local trace density.

At a point the data is a metric g (symmetric positive definite), a magnetic
2-form F (antisymmetric matrix of coefficients) and a scalar potential V.
The frequencies a_1 <= ... <= a_n are the positive halves of the spectrum of
the skew-symmetric operator coupling F to g; concretely they are extracted
from A = g^{-1/2} F g^{-1/2}, whose nonzero singular values come in equal
pairs (a_j, a_j).  The Landau levels at the point are

    Lambda_k = sum_j (2 k_j + 1) a_j + V,   k in Z_+^n,

and the local spectral density against a probe phi is

    f0 = (2 pi)^{-(d-n)} (prod_j a_j) * sum_k  int_{R^{d-2n}} phi(|xi|^2 + Lambda_k) dxi

(the xi-integral is absent when F has maximal rank d = 2n).  The manifold
coefficient is the weighted sum of f0 over a quadrature of the Riemannian
volume.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from ._shells import certified_shell_sum
from .probes import TestFunction, envelope, evaluate

RANK_TOL = 1e-10  # singular values below RANK_TOL * ||A|| count as kernel


@dataclass(frozen=True)
class PointMagneticData:
    g: np.ndarray        # d x d symmetric positive definite
    F: np.ndarray        # d x d antisymmetric
    V: float = 0.0

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.g, dtype=float))
        F = np.atleast_2d(np.asarray(self.F, dtype=float))
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "F", F)
        d = g.shape[0]
        if g.shape != (d, d) or F.shape != (d, d):
            raise ValueError("g and F must be square matrices of equal size")
        scale = max(np.abs(g).max(), 1.0)
        if np.abs(g - g.T).max() > 1e-14 * scale:
            raise ValueError("metric g is not symmetric")
        if np.linalg.eigvalsh(g).min() <= 0:
            raise ValueError("metric g is not positive definite")
        fscale = max(np.abs(F).max(), 1.0)
        if np.abs(F + F.T).max() > 1e-14 * fscale:
            raise ValueError("field F is not antisymmetric")

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def volume_density(self) -> float:
        """sqrt(det g), the Riemannian density in these coordinates."""
        return math.sqrt(np.linalg.det(self.g))


@dataclass(frozen=True)
class MagneticFrequencies:
    a: tuple          # ascending positive frequencies, one per 2x2 block
    rank2n: int
    rank_warning: bool = False

    @property
    def n(self) -> int:
        return len(self.a)


def magnetic_frequencies(point: PointMagneticData) -> MagneticFrequencies:
    """Frequencies a_j and rank of F at a point.

    Works on A = g^{-1/2} F g^{-1/2}: real antisymmetric, so its singular
    values are the |a_j|, each exactly twice.  The SVD route keeps kernel
    singular values at the eps * ||A|| level (squaring into -A^2 would lift
    rounding zeros to sqrt(eps) * ||A||, above the rank cutoff) and avoids
    complex arithmetic while making the pairing automatic.  Singular values
    within a decade of the cutoff set ``rank_warning``.
    """
    g = point.g
    w, U = np.linalg.eigh(g)
    g_inv_half = (U / np.sqrt(w)) @ U.T
    A = g_inv_half @ point.F @ g_inv_half
    sv = np.linalg.svd(A, compute_uv=False)  # descending, in near-equal pairs
    norm = sv[0] if len(sv) else 0.0
    tol = RANK_TOL * norm
    warn = bool(norm > 0 and np.any((sv > 0.1 * tol) & (sv < 10.0 * tol)))
    nonzero = np.sort(sv[sv > tol])
    if len(nonzero) % 2:
        raise ValueError("odd count of nonzero singular values; F is not antisymmetric enough")
    freqs = tuple(float(0.5 * (nonzero[2 * i] + nonzero[2 * i + 1])) for i in range(len(nonzero) // 2))
    return MagneticFrequencies(a=freqs, rank2n=len(nonzero), rank_warning=warn)


def landau_level(freqs: MagneticFrequencies, V: float, k) -> float:
    """Lambda_k = sum_j (2 k_j + 1) a_j + V."""
    k = tuple(k)
    if len(k) != freqs.n:
        raise ValueError(f"multi-index length {len(k)} != number of frequencies {freqs.n}")
    return sum((2 * kj + 1) * aj for kj, aj in zip(k, freqs.a)) + V


def _radial_integral(phi: TestFunction, m: int, c: float, tol: float) -> float:
    """int_{R^m} phi(|xi|^2 + c) dxi = (2 pi^{m/2}/Gamma(m/2)) int_0^inf u^{m-1} phi(c+u^2) du."""
    window = phi.mu + phi.sigma * math.sqrt(2.0 * max(math.log(10.0 / tol), 1.0)) + 10.0 * phi.sigma
    U = math.sqrt(max(window - c, 1.0))
    val, _ = quad(
        lambda u: u ** (m - 1) * evaluate(phi, c + u * u),
        0.0,
        U,
        epsabs=0.1 * tol,
        epsrel=1e-13,
        limit=300,
    )
    return 2.0 * math.pi ** (m / 2.0) / math.gamma(m / 2.0) * val


def _radial_term_bound(phi: TestFunction, m: int, c: float) -> float:
    """Upper bound on int_{R^m} |phi(|xi|^2 + c)| dxi for c past the probe center."""
    if m == 0:
        return envelope(phi, c)
    rate = 0.5 if phi.degree == 0 else 0.25
    q = 2.0 * rate * max(c - phi.mu, phi.sigma) / phi.sigma**2
    return envelope(phi, c) * (math.pi / q) ** (m / 2.0)


def local_density_f0(point: PointMagneticData, phi: TestFunction, truncation_tol: float = 1e-12) -> float:
    """Local density f0 at the point, with certified Landau-sum truncation.

    The sum over k in Z_+^n runs by shells s = |k|; it stops once the
    enveloped bound on everything beyond the current shell is below
    ``truncation_tol``.  The bound uses monotone Gaussian majorants, so it is
    an actual upper bound on the omitted mass, not a heuristic.
    """
    if truncation_tol <= 0:
        raise ValueError("truncation_tol must be positive")
    freqs = magnetic_frequencies(point)
    d = point.dim
    n = freqs.n
    m = d - freqs.rank2n
    if m < 0:
        raise ValueError("rank exceeds dimension")
    pref = (2.0 * math.pi) ** (n - d) * math.prod(freqs.a)

    def term(beta):
        lam = beta + point.V
        if m == 0:
            return evaluate(phi, lam)
        return _radial_integral(phi, m, lam, truncation_tol)

    def term_bound(beta):
        return _radial_term_bound(phi, m, beta + point.V)

    center = phi.mu + 2.0 * phi.sigma * (1 + phi.degree) - point.V
    value, _tail = certified_shell_sum(freqs.a, term, term_bound, truncation_tol, center)
    return pref * value


@dataclass(frozen=True)
class ManifoldQuadrature:
    """Nodes (PointMagneticData, weight) discretizing the Riemannian volume."""

    nodes: tuple
    total_volume: float = field(default=0.0)

    def __post_init__(self):
        nodes = tuple((p, float(w)) for p, w in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if any(w <= 0 for _, w in nodes):
            raise ValueError("quadrature weights must be positive")
        wsum = math.fsum(w for _, w in nodes)
        if self.total_volume == 0.0:
            object.__setattr__(self, "total_volume", wsum)
        elif abs(wsum - self.total_volume) > 1e-10 * abs(self.total_volume):
            raise ValueError("weights do not sum to the stated total volume")


def integrate_f0(quadrature: ManifoldQuadrature, phi: TestFunction, truncation_tol: float = 1e-12) -> float:
    """int_M f0(x) dv_M over the quadrature nodes.

    All nodes must share the same dimension and rank; mixed-rank quadratures
    are rejected because the pointwise formula presupposes a fixed n.
    """
    dims = set()
    ranks = set()
    freqs_cache = []
    for point, w in quadrature.nodes:
        fr = magnetic_frequencies(point)
        dims.add(point.dim)
        ranks.add(fr.rank2n)
        freqs_cache.append(fr)
    if len(dims) > 1:
        raise ValueError("quadrature nodes have mixed dimensions")
    if len(ranks) > 1:
        raise ValueError("quadrature nodes have mixed rank; constant rank is required")
    vals = [w * local_density_f0(point, phi, truncation_tol) for point, w in quadrature.nodes]
    return math.fsum(vals)


def torus_quadrature(grid: int, field_fn=None, potential=None) -> ManifoldQuadrature:
    """Uniform midpoint grid on the flat unit 2-torus with F = 2*pi*f(x,y) dx^dy."""
    if grid < 1:
        raise ValueError("grid must be positive")
    f = field_fn if field_fn is not None else (lambda x, y: 1.0)
    V = potential if potential is not None else (lambda x, y: 0.0)
    h = 1.0 / grid
    nodes = []
    eye = np.eye(2)
    for i in range(grid):
        for j in range(grid):
            x, y = (i + 0.5) * h, (j + 0.5) * h
            F = np.array([[0.0, 2.0 * math.pi * f(x, y)], [-2.0 * math.pi * f(x, y), 0.0]])
            nodes.append((PointMagneticData(eye, F, V(x, y)), h * h))
    return ManifoldQuadrature(tuple(nodes), total_volume=1.0)


def sphere_quadrature(radius: float, n_theta: int = 24, n_phi: int = 8) -> ManifoldQuadrature:
    """Round sphere of the given radius: Gauss-Legendre in cos(theta), uniform in phi."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    from scipy.special import roots_legendre

    u, w_gl = roots_legendre(n_theta)  # u = cos(theta) on [-1, 1]
    nodes = []
    for ui, wi in zip(u, w_gl):
        theta = math.acos(ui)
        sin_t = math.sin(theta)
        g = np.diag([radius**2, (radius * sin_t) ** 2])
        F = np.array([[0.0, 0.5 * sin_t], [-0.5 * sin_t, 0.0]])
        # dv = R^2 sin(theta) dtheta dphi = R^2 du dphi
        weight = radius**2 * wi * (2.0 * math.pi / n_phi)
        for _j in range(n_phi):
            nodes.append((PointMagneticData(g, F, 0.0), weight))
    return ManifoldQuadrature(tuple(nodes), total_volume=4.0 * math.pi * radius**2)


def quadrature_to_csv(quadrature: ManifoldQuadrature) -> str:
    """CSV dump: columns d, g (row-major), F (strict upper triangle, row-major), V, weight."""
    out = io.StringIO()
    writer = csv.writer(out)
    d = quadrature.nodes[0][0].dim
    header = ["d"]
    header += [f"g{i}{j}" for i in range(d) for j in range(d)]
    header += [f"F{i}{j}" for i in range(d) for j in range(i + 1, d)]
    header += ["V", "weight"]
    writer.writerow(header)
    for point, w in quadrature.nodes:
        row = [point.dim]
        row += [repr(float(v)) for v in point.g.ravel()]
        row += [repr(float(point.F[i, j])) for i in range(d) for j in range(i + 1, d)]
        row += [repr(float(point.V)), repr(float(w))]
        writer.writerow(row)
    return out.getvalue()


def quadrature_from_csv(text: str) -> ManifoldQuadrature:
    rows = list(csv.reader(io.StringIO(text)))
    nodes = []
    for row in rows[1:]:
        if not row:
            continue
        d = int(row[0])
        vals = [float(v) for v in row[1:]]
        g = np.array(vals[: d * d]).reshape(d, d)
        tri = vals[d * d : d * d + d * (d - 1) // 2]
        F = np.zeros((d, d))
        pos = 0
        for i in range(d):
            for j in range(i + 1, d):
                F[i, j] = tri[pos]
                F[j, i] = -tri[pos]
                pos += 1
        V, w = vals[d * d + d * (d - 1) // 2 :]
        nodes.append((PointMagneticData(g, F, V), w))
    return ManifoldQuadrature(tuple(nodes))
