"""Eigenvalue counting, the Demailly limit and the band structure of the
rescaled spectrum.

The counting function N_N(lambda) counts eigenvalues of (1/N) H_N up to
lambda (with multiplicity); its N^{-d/2}-scaled limit is the manifold
integral

    (2^{n-d} pi^{-d/2} / Gamma(d/2 - n + 1)) *
        sum_k int_M (lambda - Lambda_k(x))_+^{d/2-n} (prod_j a_j(x)) dv_M(x).

At maximal rank (d = 2n) the exponent is zero and (.)_+^0 is read as the
indicator of Lambda_k(x) < lambda, which turns the integral into a
Landau-level count against the Liouville volume.  The band set Sigma is the
union over k of the ranges of Lambda_k over the quadrature nodes.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

from .geometry import ManifoldQuadrature, magnetic_frequencies
from .spectra import ModelSystem, spectrum

JUMP_TOL = 1e-9


class NearJumpWarning(UserWarning):
    """Some Landau level sits within JUMP_TOL of lambda: the limit may jump here."""


@dataclass(frozen=True)
class CountingResult:
    N: int
    lam: float
    count: int
    scaled: float


@dataclass(frozen=True)
class BandSet:
    intervals: tuple  # ((alpha_k, beta_k), ...) disjoint, ascending

    def __post_init__(self):
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", iv)
        for a, b in iv:
            if a > b:
                raise ValueError("interval endpoints out of order")
        for (_, b1), (a2, _) in zip(iv, iv[1:]):
            if a2 <= b1:
                raise ValueError("intervals overlap or are unsorted")

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return any(a - slack <= x <= b + slack for a, b in self.intervals)


def counting_function(model: ModelSystem, N: int, lam: float) -> CountingResult:
    """Multiplicity count of rescaled eigenvalues <= lam."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if model.variant == "hyperbolic" and lam >= N / model.R**2:
        raise ValueError(
            "hyperbolic counting is only defined below the continuous onset N/R^2; "
            "the continuous spectrum has no closed form"
        )
    lines = spectrum(model, N, cutoff=lam)
    count = sum(line.multiplicity for line in lines)
    return CountingResult(N, lam, count, count * N ** (-model.dim / 2.0))


def _node_frequencies(quadrature: ManifoldQuadrature):
    data = [(point, w, magnetic_frequencies(point)) for point, w in quadrature.nodes]
    ranks = {fr.rank2n for _, _, fr in data}
    dims = {point.dim for point, _, _ in data}
    if len(ranks) > 1 or len(dims) > 1:
        raise ValueError("quadrature must have constant dimension and rank")
    return data


def demailly_limit(quadrature: ManifoldQuadrature, lam: float, d: int) -> float:
    """The N -> infinity limit of N^{-d/2} N_N(lambda) over the quadrature."""
    data = _node_frequencies(quadrature)
    n = data[0][2].n
    if d < 2 * n:
        raise ValueError("dimension d must be at least the rank 2n")
    exponent = d / 2.0 - n
    pref = 2.0 ** (n - d) * math.pi ** (-d / 2.0) / math.gamma(exponent + 1.0)
    total = []
    near_jump = False
    for point, w, fr in data:
        prod_a = math.prod(fr.a)
        for s in itertools.count():
            if n == 0 and s > 0:
                break
            beta_min = (2 * s + n) * (min(fr.a) if n else 0.0)
            if beta_min + point.V >= lam + 1.0:
                break
            shell = (
                [()] if n == 0 else
                [k for k in itertools.product(range(s + 1), repeat=n) if sum(k) == s]
            )
            for k in shell:
                level = sum((2 * kj + 1) * a for kj, a in zip(k, fr.a)) + point.V
                if abs(level - lam) < JUMP_TOL:
                    near_jump = True
                if exponent == 0:
                    total.append(w * prod_a if level < lam else 0.0)
                elif level < lam:
                    total.append(w * prod_a * (lam - level) ** exponent)
    if near_jump:
        warnings.warn("a Landau level lies within 1e-9 of lambda; the limit jumps nearby", NearJumpWarning)
    return pref * math.fsum(total)


def band_set(quadrature: ManifoldQuadrature, cutoff: float) -> BandSet:
    """Sigma truncated at ``cutoff``: merged ranges of Lambda_k over the nodes."""
    data = _node_frequencies(quadrature)
    n = data[0][2].n
    d = data[0][0].dim
    if d != 2 * n:
        raise ValueError("band_set requires maximal rank d = 2n")
    raw = []
    for s in itertools.count():
        shell = [k for k in itertools.product(range(s + 1), repeat=n) if sum(k) == s]
        shell_min = math.inf
        for k in shell:
            levels = [
                sum((2 * kj + 1) * a for kj, a in zip(k, fr.a)) + point.V
                for point, _, fr in data
            ]
            lo, hi = min(levels), max(levels)
            shell_min = min(shell_min, lo)
            if lo <= cutoff:
                raw.append((lo, hi))
        if shell_min > cutoff:
            break
    raw.sort()
    merged = []
    for lo, hi in raw:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return BandSet(tuple((a, b) for a, b in merged))
