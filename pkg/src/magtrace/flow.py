"""Linearized magnetic flow at critical points: block rotations, periods and
the determinant/sin identity.

In symplectic coordinates (u_1, v_1, ..., u_n, v_n) on the normal space the
flow acts per pair as a rotation with angle 2 a_k t:

    u_k(t) =  cos(2 a_k t) u_k + sin(2 a_k t) v_k
    v_k(t) = -sin(2 a_k t) u_k + cos(2 a_k t) v_k.

Each 2x2 block satisfies det(I - R(psi)) = 4 sin^2(psi/2), so

    |det(I - M(t))|^{1/2} = 2^n prod_k |sin(a_k t)|;

the identity is implemented with the 2^n normalization made explicit
(``det_identity`` returns both sides so the factor is visible).  The period
set of the flow is {m pi / a_k}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PERIOD_DEDUP_TOL = 1e-12
PERIOD_GUARD = 1e-8


@dataclass(frozen=True)
class FlowMatrix:
    a: tuple
    t: float
    matrix: np.ndarray  # 2n x 2n, block diagonal in (u_k, v_k) pairs

    @property
    def n(self) -> int:
        return len(self.a)


def _standard_symplectic_form(n: int) -> np.ndarray:
    omega = np.zeros((2 * n, 2 * n))
    for k in range(n):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def flow_matrix(a, t: float) -> FlowMatrix:
    """Block-rotation matrix of the linearized flow at time t."""
    a = tuple(float(x) for x in a)
    if any(x <= 0 for x in a):
        raise ValueError("frequencies must be positive")
    n = len(a)
    M = np.zeros((2 * n, 2 * n))
    for k, ak in enumerate(a):
        c, s = math.cos(2.0 * ak * t), math.sin(2.0 * ak * t)
        M[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = [[c, s], [-s, c]]
    return FlowMatrix(a, float(t), M)


def symplectic_defect(fm: FlowMatrix) -> float:
    """max |M^T Omega M - Omega|; zero for an exact symplectic matrix."""
    omega = _standard_symplectic_form(fm.n)
    return float(np.abs(fm.matrix.T @ omega @ fm.matrix - omega).max())


def periods(a, t_max: float):
    """All periods m pi / a_k with |T| <= t_max, deduplicated and sorted."""
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    a = tuple(float(x) for x in a)
    raw = set()
    for ak in a:
        step = math.pi / ak
        m = 0
        while m * step <= t_max:
            raw.update((m * step, -m * step))
            m += 1
    out = []
    for T in sorted(raw):
        if not out or T - out[-1] > PERIOD_DEDUP_TOL:
            out.append(T)
    return out


@dataclass(frozen=True)
class DetIdentity:
    lhs: float  # prod_k |sin(a_k t)|
    rhs: float  # |det(I - M(t))|^{1/2} / 2^n


def det_identity(a, t: float) -> DetIdentity:
    """Both sides of prod|sin a_k t| = |det(I - M(t))|^{1/2} / 2^n.

    Refuses t within PERIOD_GUARD of a period, where both sides degenerate
    to zero and the comparison is vacuous.
    """
    a = tuple(float(x) for x in a)
    for T in periods(a, abs(t) + 1.0):
        if abs(t - T) < PERIOD_GUARD:
            raise ValueError(f"t = {t} is within {PERIOD_GUARD} of the period {T}")
    fm = flow_matrix(a, t)
    lhs = math.prod(abs(math.sin(ak * t)) for ak in a)
    det = np.linalg.det(np.eye(2 * len(a)) - fm.matrix)
    rhs = math.sqrt(abs(det)) / 2.0 ** len(a)
    return DetIdentity(lhs, rhs)


def sphere_flow_matrix(radius: float, theta0: float, t: float) -> np.ndarray:
    """Linearized flow on the round sphere in the (P_theta, P_phi) chart.

    Closed-form solution of the variational equations at colatitude theta0:
    a rotation with angle t/R^2 conjugated by the chart scaling
    diag(1/sqrt(sin theta0), sqrt(sin theta0)).
    """
    if not 0.0 < theta0 < math.pi:
        raise ValueError("theta0 must lie strictly between 0 and pi")
    c, s = math.cos(t / radius**2), math.sin(t / radius**2)
    sin_t0 = math.sin(theta0)
    return np.array([[c, s / sin_t0], [-s * sin_t0, c]])
