"""Recovery of expansion coefficients from sampled Y_N data.

Given samples (N, Y_N) and a caller-chosen exponent lattice p_0 > p_1 > ...,
solves the weighted least-squares problem

    min sum_i w_i (Y_i - sum_r f_r N_i^{p_r})^2,   w_i = N_i^{-2 min_r p_r},

so that the slowest basis function enters with order-one weighted columns and
subleading coefficients stay identifiable against the growth of Y_N.  The
exponent lattice is deliberately not inferred from the data: whether
half-integer powers vanish is exactly the kind of structure callers want to
test, so hiding it behind auto-detection would defeat the purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class ExpansionFit:
    powers: tuple
    coefficients: tuple
    residual_rms: float
    condition_estimate: float

    def coefficient(self, power: float) -> float:
        return self.coefficients[self.powers.index(power)]

    def __str__(self):
        terms = " + ".join(f"({c:.6g})*N^{p:g}" for p, c in zip(self.powers, self.coefficients))
        return f"ExpansionFit[{terms}; rms={self.residual_rms:.3g}, cond={self.condition_estimate:.3g}]"


def fit_expansion(samples, powers) -> ExpansionFit:
    """Weighted least-squares fit of sum_r f_r N^{p_r} to samples (N, value)."""
    powers = tuple(float(p) for p in powers)
    if len(samples) < len(powers) + 2:
        raise ValueError("need at least len(powers) + 2 samples")
    Ns = np.array([float(N) for N, _ in samples])
    if len(set(Ns.tolist())) != len(Ns):
        raise ValueError("sample N values must be distinct")
    ys = np.array([float(v) for _, v in samples])
    sqrt_w = Ns ** (-min(powers))
    design = np.stack([Ns**p for p in powers], axis=1) * sqrt_w[:, None]
    rhs = ys * sqrt_w
    coef, _res, _rank, sv = np.linalg.lstsq(design, rhs, rcond=None)
    condition = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    if condition > CONDITION_LIMIT:
        raise ValueError(
            f"design matrix condition {condition:.3g} exceeds {CONDITION_LIMIT:.0e}; "
            "use fewer powers or a wider range of N"
        )
    resid = design @ coef - rhs
    rms = float(np.sqrt(np.mean(resid**2)))
    return ExpansionFit(powers, tuple(float(c) for c in coef), rms, condition)


@dataclass(frozen=True)
class RichardsonResult:
    limit: complex
    error_estimate: float


def richardson(values, order: int) -> RichardsonResult:
    """Neville extrapolation of samples (h, value) to h = 0.

    ``values`` must be ordered with h descending; ``order + 1`` samples are
    required (extra samples are used too - the full diagonal is returned).
    The error estimate is the difference between the last two diagonal
    entries of the Neville tableau.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    hs = [float(h) for h, _ in values]
    ys = [v for _, v in values]
    if len(hs) < order + 1:
        raise ValueError(f"need at least {order + 1} samples for order {order}")
    if any(h2 >= h1 for h1, h2 in zip(hs, hs[1:])):
        raise ValueError("step sizes must be strictly descending")
    tableau = list(ys)
    previous_diag = tableau[0]
    for level in range(1, len(hs)):
        for i in range(len(hs) - level):
            tableau[i] = tableau[i + 1] + (tableau[i + 1] - tableau[i]) * hs[i + level] / (
                hs[i] - hs[i + level]
            )
        if level == len(hs) - 2:
            previous_diag = tableau[0]
    limit = tableau[0]
    err = abs(limit - previous_diag)
    if not isinstance(limit, complex):
        limit = float(limit)
    return RichardsonResult(limit, float(err))
