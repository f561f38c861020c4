"""Inertia counts, the half-plane count, the subspace addition rule, and
the indefinite orthogonalization.  The LDL factorization serves as the
congruence (Sylvester-law) oracle for inertia."""

import numpy as np
import pytest
import scipy.linalg

from sik import (
    DegenerateRestriction,
    NeutralVectorEncountered,
    NonHermitianInput,
    addition_rule_check,
    count_half_plane,
    indefinite_gram_schmidt,
    inertia_hermitian,
    instability_index_general,
    u_orth_complement,
)


def random_hermitian(rng, n, min_gap=0.2):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    vals = rng.uniform(min_gap, 2.0, size=n) * rng.choice([-1.0, 1.0], size=n)
    return (Q * vals) @ Q.conj().T, int(np.sum(vals > 0))


def ldl_inertia(H):
    # congruence route: signs of the block-diagonal D in P L D L^H P^T
    H = H.copy()
    # Hermitian diagonal is real; drop the roundoff imaginary part that
    # scipy's ldl would otherwise warn about
    np.fill_diagonal(H, H.diagonal().real)
    _, D, _ = scipy.linalg.ldl(H)
    eigs = []
    i = 0
    n = D.shape[0]
    while i < n:
        if i + 1 < n and D[i, i + 1] != 0.0:
            eigs.extend(np.linalg.eigvalsh(D[i : i + 2, i : i + 2]))
            i += 2
        else:
            eigs.append(D[i, i].real)
            i += 1
    eigs = np.asarray(eigs)
    return int(np.sum(eigs > 0)), int(np.sum(eigs < 0))


def test_inertia_matches_ldl_congruence():
    rng = np.random.default_rng(41)
    for _ in range(50):
        n = int(rng.integers(2, 13))
        H, n_plus_true = random_hermitian(rng, n)
        inert = inertia_hermitian(H)
        n_plus_ldl, n_minus_ldl = ldl_inertia(H)
        assert inert.n_plus == n_plus_true == n_plus_ldl
        assert inert.n_minus == n - n_plus_true == n_minus_ldl
        assert inert.n_zero == 0
        assert inert.n_plus + inert.n_minus + inert.n_zero == n


def test_inertia_zero_tolerance():
    H = np.diag([1.0, 1e-12])
    inert = inertia_hermitian(H)
    assert (inert.n_plus, inert.n_zero) == (1, 1)
    assert inert.zero_tol == pytest.approx(1e-8)
    strict = inertia_hermitian(H, zero_tol=1e-13)
    assert (strict.n_plus, strict.n_zero) == (2, 0)


def test_inertia_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        inertia_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_count_half_plane_values():
    ev = np.array([2.0 + 1.0j, -3.0, 1e-12, 0.5j])
    n_plus, n_minus, n_zero, gap = count_half_plane(ev, 1e-9)
    assert (n_plus, n_minus, n_zero) == (1, 1, 2)
    assert gap == 0.0
    assert count_half_plane(np.array([]), 1e-9)[:3] == (0, 0, 0)


def test_general_count_on_constructed_spectra():
    rng = np.random.default_rng(42)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        re = rng.uniform(0.5, 3.0, size=n) * rng.choice([-1.0, 1.0], size=n)
        lam = re + 1j * rng.standard_normal(n)
        while True:
            V = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            if np.linalg.cond(V) < 50.0:
                break
        A = V @ np.diag(lam) @ np.linalg.inv(V)
        inert = instability_index_general(A)
        assert inert.n_plus == int(np.sum(re > 0))
        assert inert.n_minus == n - inert.n_plus
        assert inert.n_zero == 0
        assert inert.eig_residual < 1e-10
        assert inert.gap == pytest.approx(np.min(np.abs(re)), rel=1e-6)


def test_u_orth_complement_properties():
    rng = np.random.default_rng(43)
    for _ in range(20):
        n = int(rng.integers(3, 10))
        U, _ = random_hermitian(rng, n)
        k = int(rng.integers(1, n))
        S = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        C = u_orth_complement(U, S)
        assert C.shape == (n, n - k)
        assert np.max(np.abs(S.conj().T @ U @ C)) < 1e-9
        assert np.allclose(C.conj().T @ C, np.eye(n - k), atol=1e-10)
    # 1-d input is promoted to a column
    U, _ = random_hermitian(np.random.default_rng(5), 4)
    C = u_orth_complement(U, np.array([1.0, 0.0, 0.0, 0.0]))
    assert C.shape == (4, 3)


def test_addition_rule_random_instances():
    rng = np.random.default_rng(44)
    done = 0
    attempts = 0
    while done < 100:
        attempts += 1
        assert attempts < 500
        n = int(rng.integers(2, 11))
        U, _ = random_hermitian(rng, n)
        k = int(rng.integers(1, n))
        S1 = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        try:
            lhs, rhs = addition_rule_check(U, S1)
        except DegenerateRestriction:
            continue
        assert lhs == rhs
        done += 1


def test_addition_rule_neutral_intersection():
    # the swap form: both restrictions are neutral, the intersection is
    # one-dimensional, and kappa(U) = 1 comes entirely from the overlap
    U = np.array([[0.0, 1.0], [1.0, 0.0]])
    lhs, rhs = addition_rule_check(U, np.array([1.0, 0.0]))
    assert lhs == 1
    assert rhs == 1


def test_addition_rule_degenerate_guard():
    U = np.diag([1.0, 3e-8])
    with pytest.raises(DegenerateRestriction):
        addition_rule_check(U, np.eye(2))


def test_indefinite_gram_schmidt_properties():
    rng = np.random.default_rng(45)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        U, n_plus = random_hermitian(rng, n)
        basis = indefinite_gram_schmidt(U, list(np.eye(n).T))
        assert len(basis) == n
        G = np.array([[(w.conj() @ U @ v).real for v in basis] for w in basis])
        off = G - np.diag(np.diag(G))
        assert np.max(np.abs(off)) < 1e-8
        pivots = np.diag(G)
        assert np.allclose(np.abs(pivots), 1.0, atol=1e-10)
        # completeness: positive pivots count the positive inertia
        assert int(np.sum(pivots > 0)) == n_plus


def test_indefinite_gram_schmidt_neutral_raises():
    U = np.array([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(NeutralVectorEncountered):
        indefinite_gram_schmidt(U, [np.array([1.0, 0.0])])
    with pytest.raises(NeutralVectorEncountered):
        indefinite_gram_schmidt(np.eye(2), [np.zeros(2)])
