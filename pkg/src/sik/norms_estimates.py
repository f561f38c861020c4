"""Auxiliary kernel norm |||.||| and the tail estimates built on it.

    |||F||| = 2 pi sigma_max(W),  W(p,q) = (2 + p^4 + q^4) |Fhat(p,q)|

The norm is phase-insensitive and sandwiched between the L^2 -> H^4
operator norm (below) and the H^4 kernel norm (above).  For a truncation
at order N with constant M the solution U of the Lyapunov equation obeys

    1 <= |||U||| <= (1 + lambda_max) / (1 - delta_N),  delta_N = M N^-2,

where lambda_max = |||P_N K P_N||| and K = U - U0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DeltaTooLarge
from .fourier_core import Kernel2D

__all__ = [
    "triple_norm",
    "lambda_max_statistic",
    "TailReport",
    "estimate_triple_U",
    "tail_bound",
]

_TWO_PI = 2.0 * math.pi

# dense SVD up to this matrix size; power iteration beyond
_DENSE_SVD_LIMIT = 1025


def _weight_matrix(F: Kernel2D) -> np.ndarray:
    p = F.modes().astype(float)
    return (2.0 + p[:, None] ** 4 + p[None, :] ** 4) * np.abs(F.coeffs)


def _sigma_max(W: np.ndarray) -> float:
    if W.shape[0] <= _DENSE_SVD_LIMIT:
        return float(scipy.linalg.svdvals(W)[0])
    # power iteration on W^T W; W is entrywise nonnegative so the all-ones
    # start vector has nonzero overlap with the top singular pair
    v = np.full(W.shape[1], 1.0 / math.sqrt(W.shape[1]))
    sigma = 0.0
    for _ in range(10_000):
        u = W @ v
        v_next = W.T @ u
        norm = np.linalg.norm(v_next)
        if norm == 0.0:
            return 0.0
        sigma_next = math.sqrt(norm)
        v = v_next / norm
        if abs(sigma_next - sigma) <= 1e-12 * max(sigma_next, 1e-300):
            return sigma_next
        sigma = sigma_next
    return sigma


def triple_norm(F: Kernel2D) -> float:
    """|||F||| = 2 pi sigma_max((2 + p^4 + q^4)|Fhat(p,q)|)."""
    return _TWO_PI * _sigma_max(_weight_matrix(F))


def lambda_max_statistic(U_sol) -> float:
    """lambda_max = |||P_N K P_N||| for a Lyapunov solution's K = U - U0."""
    return triple_norm(U_sol.K)


@dataclass
class TailReport:
    """Bounds for |||U||| of the untruncated solution, from one solve."""

    N: int
    delta_N: float
    tripleU_lower: float
    tripleU_upper: float
    lambda_max: float


def estimate_triple_U(U_sol, M: float) -> TailReport:
    """Two-sided bound 1 <= |||U||| <= (1 + lambda_max)/(1 - delta_N)."""
    N = U_sol.N
    delta = M / float(N) ** 2
    if delta >= 1.0:
        raise DeltaTooLarge(
            f"delta_N = M N^-2 = {delta:.3g} >= 1 at N={N}; increase N"
        )
    lam = lambda_max_statistic(U_sol)
    return TailReport(
        N=N,
        delta_N=delta,
        tripleU_lower=1.0,
        tripleU_upper=(1.0 + lam) / (1.0 - delta),
        lambda_max=lam,
    )


def tail_bound(M: float, N: int, tripleU: float) -> float:
    """Bound M N^-2 |||U||| for the discarded tail |||K - P_N K P_N|||."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return M * float(N) ** (-2) * tripleU
