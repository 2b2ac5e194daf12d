"""Certified summation over Landau multi-indices k in Z_+^n.

Terms are functions of beta_k = sum_j (2 k_j + 1) a_j.  Enumeration goes by
shells s = |k|; once the shell minimum (2s+n) a_min passes ``bound_from`` and
the shell bound drops below a fraction of ``tol``, remaining shells are only
bounded, and the accumulated bound is returned as the certified tail.
``term_bound(beta)`` must be a monotone-decreasing upper bound on |term| for
beta >= bound_from.
"""

from __future__ import annotations

import itertools
import math

MAX_SHELLS = 20000


def certified_shell_sum(a, term, term_bound, tol, bound_from):
    """Return (sum of term(beta_k), tail bound < tol) or raise RuntimeError."""
    n = len(a)
    if n == 0:
        return term(0.0), 0.0
    a_min = min(a)
    total = []
    tail = 0.0
    summing = True
    for s in range(MAX_SHELLS):
        beta_min = (2 * s + n) * a_min
        if n == 1:
            shell = [(s,)]
        else:
            shell = [k for k in itertools.product(range(s + 1), repeat=n) if sum(k) == s]
        if summing:
            for k in shell:
                total.append(term(sum((2 * kj + 1) * aj for kj, aj in zip(k, a))))
            if beta_min > bound_from and len(shell) * term_bound(beta_min) < 0.25 * tol:
                summing = False
        else:
            bound = len(shell) * term_bound(beta_min)
            tail += bound
            if bound < 1e-300:
                break
            if tail > tol:
                raise RuntimeError("certified tail exceeds the requested tolerance")
    else:
        raise RuntimeError("shell sum did not certify; terms decay too slowly")
    return math.fsum(total), tail
