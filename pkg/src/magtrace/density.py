"""Smoothed spectral density Y_N(phi) = sum_j phi(nu_{N,j} / N) with certified tails.

Lines come from the closed-form model spectra; the sum runs in ascending
order of nu with exact (fsum) accumulation.  Truncating the line list at a
rescaled cutoff is certified against a per-model bound on how much
multiplicity can live in each unit window of nu/N beyond the cutoff, paired
with the monotone probe envelope.  For the hyperbolic surface the unknowable
continuous part (Laplace eigenvalues shifted above N^2/R^2) is never summed;
instead a Weyl-type overcount

    #{lambda_l <= L} <= Area * L / (4 pi) + 10 * genus,  Area = 4 pi (genus-1) R^2

is folded with the envelope into ``continuous_part_bound``.  Any polynomial
overcount is annihilated by the Gaussian tail, so the crude constant is
harmless and keeps the bound honest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .probes import TestFunction, envelope, envelope_integral, evaluate
from .spectra import ModelSystem, spectrum


@dataclass(frozen=True)
class DensityValue:
    N: int
    value: float
    tail_bound: float
    continuous_part_bound: float = 0.0


def _unit_window_count_bound(model: ModelSystem, N: int, lam: float) -> float:
    """Upper bound on total multiplicity with nu/N in [lam, lam+1]."""
    if model.variant == "torus2":
        return N * (1.0 / (4.0 * math.pi) + 1.0)
    if model.variant == "torus3":
        levels = (lam + 1.0) / (4.0 * math.pi) + 1.0
        k_count = math.sqrt(N * (lam + 1.0)) / math.pi + 2.0
        return N * levels * k_count
    if model.variant == "sphere":
        r2 = model.R**2
        jmax = r2 * (lam + 1.0)
        return (r2 + 1.0) * (N + 2.0 * jmax + 1.0)
    # hyperbolic discrete lines are always summed in full
    return 0.0


def _truncation_tail(model: ModelSystem, N: int, phi: TestFunction, cutoff: float) -> float:
    tail = 0.0
    lam = cutoff
    for _ in range(100000):
        term = _unit_window_count_bound(model, N, lam) * envelope(phi, lam)
        tail += term
        if term < 1e-300:
            return tail
        lam += 1.0
    return math.inf


def _continuous_bound(model: ModelSystem, N: int, phi: TestFunction) -> float:
    onset = model.continuous_threshold(N)
    if onset is None:
        return 0.0
    genus, r2 = model.genus, model.R**2
    # counting measure dC(L) <= (genus-1) r2 dL plus an additive 10*genus lump at the onset
    return (genus - 1) * r2 * N * envelope_integral(phi, onset) + 10.0 * genus * envelope(phi, onset)


def smoothed_density(model: ModelSystem, N: int, phi: TestFunction, tol: float = 1e-12) -> DensityValue:
    """Y_N(phi) with certified truncation below ``tol``.

    Raises if no cutoff below mu + 60 sigma certifies, which for the Gaussian
    probe family only happens with absurd tolerances.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if model.variant == "hyperbolic":
        lines = spectrum(model, N, cutoff=(2 * N - 1) / model.R**2 + 1.0)  # all discrete lines
        value = math.fsum(line.multiplicity * evaluate(phi, line.nu / N) for line in lines)
        return DensityValue(N, value, 0.0, _continuous_bound(model, N, phi))
    spread = phi.sigma * (1 + phi.degree)
    first_level = model.landau_spacing()
    for k_width in range(8, 61, 4):
        cutoff = max(phi.mu + k_width * spread, first_level + 1.0)
        tail = _truncation_tail(model, N, phi, cutoff)
        if tail < tol:
            lines = spectrum(model, N, cutoff)
            value = math.fsum(line.multiplicity * evaluate(phi, line.nu / N) for line in lines)
            return DensityValue(N, value, tail, 0.0)
    raise RuntimeError("could not certify the truncation tail at the requested tolerance")


def density_curve(model: ModelSystem, phi: TestFunction, Ns, tol: float = 1e-12):
    """smoothed_density for each N, sorted output by N."""
    Ns = list(Ns)
    if not Ns:
        raise ValueError("Ns must be non-empty")
    return [smoothed_density(model, N, phi, tol) for N in sorted(Ns)]
