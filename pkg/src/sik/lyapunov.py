"""Truncated Lyapunov equation A*U + UA = I and the Green kernel U0.

The kernel/operator index convention: an operator with kernel F acts by
(F phi)(x) = int F(x,y) phi(y) dy, so its matrix over modes is
Mat[p, q] = 2 pi Fhat(p, -q).  Solutions U are returned in both views,
and K = U - U0 (the deviation from the free kernel) feeds the tail
estimates downstream.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NearSingularPencil
from .fourier_core import Kernel2D
from .operator_assembly import SpectralMatrix

__all__ = [
    "GreenKernel",
    "green_kernel",
    "LyapunovSolution",
    "solve_finite_lyapunov",
    "solve_lyapunov_core",
    "kernel_operator_convert",
]

_TWO_PI = 2.0 * math.pi


@dataclass
class GreenKernel:
    """Convolution kernel U0(x,y) = u0(x-y), u0hat(p) = -1/(4 pi (1+p^4)).

    2 U0 is the periodic Green's function of -(d/dx)^4 - 1: the matrix view
    is diag(-1/(2(1+p^4))), which solves A*U + UA = I exactly for the free
    operator A = -(d/dx)^4 - 1.
    """

    N: int
    diag_coeffs: np.ndarray

    def as_kernel2d(self) -> Kernel2D:
        # antidiagonal: Fhat(p, q) = u0hat(p) delta_{q,-p}
        return Kernel2D(np.fliplr(np.diag(self.diag_coeffs)))

    def matrix_diag(self) -> np.ndarray:
        """Diagonal of the operator view, -1/(2(1+p^4))."""
        return _TWO_PI * self.diag_coeffs

    def closed_form(self, x):
        """u0 evaluated pointwise from the closed form

            u0(x) = C1 cos(kt) cosh(kt) + C2 sin(kt) sinh(kt),
            t = x - pi (mod 2 pi, mapped to [-pi, pi)),  k = 1/sqrt(2),

        with C1, C2 fixed by u0'(pi) = 0 and u0'''(pi) = 1/4 (periodicity
        plus the -1/2 jump of the third derivative at x = 0).
        """
        C1, C2 = _closed_form_constants()
        x = np.asarray(x, dtype=float)
        t = np.mod(x, _TWO_PI) - math.pi
        s = t / math.sqrt(2.0)
        return C1 * np.cos(s) * np.cosh(s) + C2 * np.sin(s) * np.sinh(s)


def _closed_form_constants():
    k = 1.0 / math.sqrt(2.0)
    s = k * math.pi
    cos, sin = math.cos(s), math.sin(s)
    cosh, sinh = math.cosh(s), math.sinh(s)
    # first and third derivatives of the two even basis functions at t = pi
    d1 = np.array(
        [
            [k * (cos * sinh - sin * cosh), k * (sin * cosh + cos * sinh)],
            [
                -2.0 * k**3 * (sin * cosh + cos * sinh),
                2.0 * k**3 * (cos * sinh - sin * cosh),
            ],
        ]
    )
    C = np.linalg.solve(d1, np.array([0.0, 0.25]))
    return float(C[0]), float(C[1])


def green_kernel(N: int) -> GreenKernel:
    if N < 0:
        raise ValueError("N must be >= 0")
    p = np.arange(-N, N + 1, dtype=float)
    return GreenKernel(N=N, diag_coeffs=-1.0 / (4.0 * math.pi * (1.0 + p**4)))


@dataclass
class LyapunovSolution:
    """Solution of P_N A* P_N U + U P_N A P_N = I with diagnostics."""

    U: SpectralMatrix
    K: Kernel2D
    residual: float
    N: int
    eigenvalues: np.ndarray
    pair_min: float


def _matrix_scale(A: np.ndarray) -> float:
    # cheap upper bound for ||A||_2; only used to scale tolerances
    fro = np.linalg.norm(A)
    if fro == 0.0:
        return 1.0
    one = np.abs(A).sum(axis=0).max()
    inf = np.abs(A).sum(axis=1).max()
    return float(min(fro, math.sqrt(one * inf)))


def solve_lyapunov_core(A: np.ndarray, pencil_tol=1e-15, residual_tol=1e-8):
    """Solve A^H U + U A = I for a raw square matrix.

    One complex Schur decomposition plus a triangular Sylvester solve
    (LAPACK trsyl).  Returns (U, eigenvalues, residual, pair_min) where
    residual = ||A^H U + U A - I||_F / sqrt(n) and pair_min is the minimal
    |lambda_i + conj(lambda_j)| over eigenvalue pairs.

    Raises NearSingularPencil when pair_min <= pencil_tol * ||A||, i.e.
    when the spectrum (nearly) touches the imaginary axis.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    T, Z = scipy.linalg.schur(A, output="complex")
    ev = np.diag(T).copy()
    pair_min = float(np.abs(ev[:, None] + ev[None, :].conj()).min())
    tol = pencil_tol * _matrix_scale(A)
    if pair_min <= tol:
        raise NearSingularPencil(
            f"eigenvalue pair sum {pair_min:.3e} <= tolerance {tol:.3e}: "
            "spectrum touches the imaginary axis within tolerance",
            eigenvalues=ev,
            pair_min=pair_min,
            tol=tol,
        )
    (trsyl,) = scipy.linalg.get_lapack_funcs(("trsyl",), (T, T))
    Y, scale, info = trsyl(T, T, np.eye(n, dtype=complex), trana="C", tranb="N", isgn=1)
    if info < 0:
        raise RuntimeError(f"trsyl failed with info={info}")
    if info == 1:
        # solved only after perturbing near-common eigenvalues: same failure
        # mode the pencil test guards, reached through rounding
        raise NearSingularPencil(
            "triangular Sylvester solve required perturbation",
            eigenvalues=ev,
            pair_min=pair_min,
            tol=tol,
        )
    U = Z @ (Y / scale) @ Z.conj().T
    U = 0.5 * (U + U.conj().T)
    R = A.conj().T @ U + U @ A - np.eye(n)
    residual = float(np.linalg.norm(R)) / math.sqrt(n)
    if residual > residual_tol:
        warnings.warn(
            f"Lyapunov residual {residual:.3e} exceeds {residual_tol:.1e}; "
            "treat the solution as unreliable",
            stacklevel=2,
        )
    return U, ev, residual, pair_min


def solve_finite_lyapunov(
    A_N: SpectralMatrix, pencil_tol=1e-15, residual_tol=1e-8
) -> LyapunovSolution:
    """Solve the truncated equation for an assembled operator matrix."""
    U, ev, residual, pair_min = solve_lyapunov_core(
        A_N.entries, pencil_tol=pencil_tol, residual_tol=residual_tol
    )
    N = A_N.N
    U_mat = SpectralMatrix(U, N)
    K = kernel_operator_convert(U_mat).coeffs - green_kernel(N).as_kernel2d().coeffs
    return LyapunovSolution(
        U=U_mat,
        K=Kernel2D(K),
        residual=residual,
        N=N,
        eigenvalues=ev,
        pair_min=pair_min,
    )


def kernel_operator_convert(obj):
    """Swap between the kernel view and the operator (matrix) view.

    Mat[p, q] = 2 pi Fhat(p, -q); applying the conversion twice returns the
    original object.
    """
    if isinstance(obj, SpectralMatrix):
        return Kernel2D(obj.entries[:, ::-1] / _TWO_PI)
    if isinstance(obj, Kernel2D):
        return SpectralMatrix(obj.coeffs[:, ::-1] * _TWO_PI)
    raise TypeError(f"expected SpectralMatrix or Kernel2D, got {type(obj).__name__}")
