"""Inertia, right-half-plane eigenvalue counts, and the addition rule.

The instability index of a matrix A is the number of eigenvalues in the
open right half-plane with multiplicity.  For a Hermitian U it equals the
number of positive eigenvalues n_plus (the inertia route); the two are tied
by the Lyapunov correspondence and must agree on certified runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateRestriction,
    NeutralVectorEncountered,
    NonHermitianInput,
)

__all__ = [
    "Inertia",
    "inertia_hermitian",
    "instability_index_general",
    "count_half_plane",
    "u_orth_complement",
    "addition_rule_check",
    "indefinite_gram_schmidt",
]


@dataclass
class Inertia:
    """Eigenvalue sign counts; n_plus + n_minus + n_zero = dimension.

    gap is the smallest distance from the counted spectrum to the dividing
    line (diagnostic); eig_residual is the relative eigendecomposition
    residual ||A - V L V^-1||_F / ||A||_F reported by the general (Schur)
    route -- values far above machine precision mean the computed
    eigenvalues, and therefore the counts, cannot be trusted.
    """

    n_plus: int
    n_minus: int
    n_zero: int
    zero_tol: float
    gap: float | None = None
    eig_residual: float | None = None


def inertia_hermitian(H, zero_tol=None) -> Inertia:
    """Inertia of a Hermitian matrix by a symmetric eigensolver.

    Default zero_tol is 1e-8 times the spectral norm.  Raises
    NonHermitianInput when ||H - H^H|| exceeds 1e-10 relative.
    """
    H = np.asarray(H)
    dev = np.linalg.norm(H - H.conj().T)
    scale = np.linalg.norm(H)
    if dev > 1e-10 * max(scale, 1e-300):
        raise NonHermitianInput(
            f"relative deviation from Hermitian symmetry {dev / max(scale, 1e-300):.3e}"
        )
    eigs = scipy.linalg.eigvalsh(0.5 * (H + H.conj().T))
    if zero_tol is None:
        top = float(np.max(np.abs(eigs))) if eigs.size else 0.0
        zero_tol = 1e-8 * top
    n_plus = int(np.sum(eigs > zero_tol))
    n_minus = int(np.sum(eigs < -zero_tol))
    n_zero = eigs.size - n_plus - n_minus
    gap = float(np.min(np.abs(eigs))) if eigs.size else None
    return Inertia(n_plus, n_minus, n_zero, float(zero_tol), gap=gap)


def count_half_plane(eigenvalues, axis_tol: float):
    """(n_plus, n_minus, n_zero, gap) of eigenvalue real parts vs the axis."""
    re = np.asarray(eigenvalues).real
    n_plus = int(np.sum(re > axis_tol))
    n_minus = int(np.sum(re < -axis_tol))
    n_zero = re.size - n_plus - n_minus
    gap = float(np.min(np.abs(re))) if re.size else None
    return n_plus, n_minus, n_zero, gap


def instability_index_general(A, axis_tol=None) -> Inertia:
    """Right-half-plane eigenvalue count of a general square matrix.

    Counts Schur eigenvalues with real part beyond +-axis_tol (default
    1e-8 times a 2-norm bound).  The returned Inertia carries two
    diagnostics: gap (minimal |Re lambda|) and eig_residual.  An
    eig_residual above ~1e-8 at double precision means the eigenvalue
    problem is too ill-conditioned for the count to mean anything.
    """
    A = np.asarray(A, dtype=complex)
    T, _ = scipy.linalg.schur(A, output="complex")
    ev = np.diag(T)
    if axis_tol is None:
        fro = np.linalg.norm(A)
        one = np.abs(A).sum(axis=0).max() if A.size else 0.0
        inf = np.abs(A).sum(axis=1).max() if A.size else 0.0
        scale = min(fro, math.sqrt(one * inf)) if fro > 0 else 0.0
        axis_tol = 1e-8 * scale
    n_plus, n_minus, n_zero, gap = count_half_plane(ev, axis_tol)
    lam, V = np.linalg.eig(A)
    try:
        recon = V @ np.diag(lam) @ np.linalg.inv(V)
        norm_A = np.linalg.norm(A)
        eig_residual = float(np.linalg.norm(A - recon) / max(norm_A, 1e-300))
    except np.linalg.LinAlgError:
        eig_residual = math.inf
    return Inertia(
        n_plus,
        n_minus,
        n_zero,
        float(axis_tol),
        gap=gap,
        eig_residual=eig_residual,
    )


def u_orth_complement(U, S) -> np.ndarray:
    """Orthonormal basis of {phi : <U phi, s> = 0 for every column s of S}.

    Computed as the nullspace of S^H U with a relative singular-value
    cutoff.  Returns an n x m array of orthonormal columns (standard inner
    product).
    """
    U = np.asarray(U, dtype=complex)
    S = np.asarray(S, dtype=complex)
    if S.ndim == 1:
        S = S[:, None]
    M = S.conj().T @ U
    _, sing, vh = np.linalg.svd(M, full_matrices=True)
    cutoff = 1e-10 * (sing[0] if sing.size and sing[0] > 0 else 1.0)
    rank = int(np.sum(sing > cutoff))
    return vh[rank:].conj().T


def _rank_with_guard(M, rel_cutoff=1e-8):
    sing = np.linalg.svd(M, compute_uv=False)
    if sing.size == 0 or sing[0] == 0.0:
        return 0
    cutoff = rel_cutoff * sing[0]
    ambiguous = np.sum((sing > cutoff / 10.0) & (sing < cutoff * 10.0))
    if ambiguous:
        raise DegenerateRestriction(
            f"{int(ambiguous)} singular value(s) within 10x of the rank cutoff"
        )
    return int(np.sum(sing >= cutoff))


def _orthonormalize(S):
    S = np.asarray(S, dtype=complex)
    if S.ndim == 1:
        S = S[:, None]
    q, r = np.linalg.qr(S)
    keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, float(np.abs(np.diag(r)).max()))
    return q[:, keep]


def _restricted_n_plus(U, B, zero_scale):
    if B.shape[1] == 0:
        return 0
    gram = B.conj().T @ U @ B
    gram = 0.5 * (gram + gram.conj().T)
    eigs = scipy.linalg.eigvalsh(gram)
    tol = 1e-8 * zero_scale
    ambiguous = np.sum((np.abs(eigs) > tol / 10.0) & (np.abs(eigs) < tol * 10.0))
    if ambiguous:
        raise DegenerateRestriction(
            f"{int(ambiguous)} restricted eigenvalue(s) within 10x of zero tolerance"
        )
    return int(np.sum(eigs > tol))


def addition_rule_check(U, S1):
    """Both sides of kappa(U) = kappa(U|Pi1) + kappa(U|Pi2) + dim(Pi1 n Pi2).

    Pi1 = span(S1), Pi2 = its U-orthogonal complement.  Returns (lhs, rhs);
    the caller compares.  Raises DegenerateRestriction when a rank or sign
    decision falls inside the ambiguity band around its tolerance.
    """
    U = np.asarray(U, dtype=complex)
    B1 = _orthonormalize(S1)
    B2 = u_orth_complement(U, B1)
    lhs = inertia_hermitian(U).n_plus
    scale = float(np.linalg.norm(U, 2))
    rhs = _restricted_n_plus(U, B1, scale) + _restricted_n_plus(U, B2, scale)
    k1, k2 = B1.shape[1], B2.shape[1]
    if k1 and k2:
        joint = _rank_with_guard(np.hstack([B1, B2]))
    else:
        joint = k1 + k2
    rhs += k1 + k2 - joint
    return lhs, rhs


def indefinite_gram_schmidt(U, vectors):
    """U-orthogonalize vectors in the indefinite form [x, y] = <U x, y>.

    Returns a list of vectors with [v_i, v_j] = 0 for i != j and
    [v_i, v_i] = +-1.  Raises NeutralVectorEncountered when a pivot
    |[v, v]| falls below tolerance (the caller must deflate or enlarge the
    set).
    """
    U = np.asarray(U, dtype=complex)
    scale = float(np.linalg.norm(U, 2))
    basis = []
    signs = []
    for vec in vectors:
        v = np.asarray(vec, dtype=complex).copy()
        vnorm = float(np.linalg.norm(v))
        if vnorm == 0.0:
            raise NeutralVectorEncountered("zero vector supplied")
        for w, eps in zip(basis, signs):
            # [v, w] = w^H U v; subtract the U-projection onto w
            v = v - eps * (w.conj() @ (U @ v)) * w
        pivot = float((v.conj() @ (U @ v)).real)
        if abs(pivot) <= 1e-10 * scale * max(float(np.linalg.norm(v)) ** 2, 1e-300):
            raise NeutralVectorEncountered(
                f"pivot {pivot:.3e} is neutral within tolerance"
            )
        w = v / math.sqrt(abs(pivot))
        basis.append(w)
        signs.append(1.0 if pivot > 0 else -1.0)
    return basis
