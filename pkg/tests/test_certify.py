"""Tests for the certification driver.

Covers the certified fixed-point loop, the structural axis reduction,
failure statuses, the JSON certificate shape, and the independent
cross-validation report.
"""

import numpy as np
import pytest

from sik import (
    CertifyOptions,
    OperatorSpec,
    TrigPoly,
    assemble_A,
    benilov_coefficients,
    certified_index,
    cross_validate,
    dispersion_index,
    tp_derivative,
)
from sik.certify import exact_axis_split


def constant_spec(a0, b0, c0):
    return OperatorSpec(
        a=TrigPoly.constant(a0),
        b=TrigPoly.constant(b0),
        c=TrigPoly.constant(c0),
    )


def selfadjoint_spec(rng, max_mode=2):
    # b = a' makes the operator formally self-adjoint, so the assembled
    # matrix is Hermitian at every truncation and kappa equals the count
    # of positive eigenvalues
    items = [(0, float(rng.normal(scale=0.6)))]
    for m in range(1, max_mode + 1):
        items.append((m, complex(rng.normal(scale=0.3), rng.normal(scale=0.3))))
    a = TrigPoly.from_nonneg_modes(items)
    b = tp_derivative(a, 1)
    c = TrigPoly.from_nonneg_modes(
        [
            (0, float(rng.normal(scale=2.0))),
            (1, complex(rng.normal(scale=0.5), rng.normal(scale=0.5))),
        ]
    )
    return OperatorSpec(a=a, b=b, c=c)


def test_trivial_spec_certifies_zero():
    spec = OperatorSpec(a=TrigPoly.zero(), b=TrigPoly.zero(), c=TrigPoly.zero())
    cert = certified_index(spec)
    assert cert.status == "Certified"
    assert cert.kappa == 0
    assert cert.kappa_schur == 0
    assert cert.kappa_lyapunov == 0
    assert cert.N_final == 8
    # the multiplier constant measures distance of c from 1, so c = 0
    # contributes exactly 1 through the l1 route
    assert cert.M == 1.0
    assert cert.delta_N == pytest.approx(1.0 / 64.0)
    assert cert.c_N == pytest.approx(1.0 - cert.tripleU_upper / 8.0 ** 4)
    assert cert.c_N > 0.999
    assert cert.cond1_ok and cert.cond2_ok
    assert cert.residual < 1e-12
    # A = diag(-p^4), so mode 0 sits exactly on the axis and is peeled
    # off structurally; the surviving gap is |Re| at p = +-1
    assert cert.n_axis == 1
    assert cert.axis_gap == pytest.approx(1.0)


def test_constant_specs_match_dispersion():
    rng = np.random.default_rng(2024)
    opts = CertifyOptions(max_N=48, max_iterations=4)
    done = 0
    while done < 8:
        a0 = float(rng.uniform(-4.0, 4.0))
        b0 = float(rng.uniform(-4.0, 4.0))
        c0 = float(rng.uniform(-4.0, 4.0))
        # require a real-part margin at every mode so neither route has
        # to adjudicate an eigenvalue that truly sits on the axis
        p = np.arange(-12, 13)
        re = -(p ** 4.0) + a0 * p ** 2.0 - c0
        if np.min(np.abs(re)) < 1e-2:
            continue
        cert = certified_index(constant_spec(a0, b0, c0), opts)
        assert cert.status == "Certified"
        assert cert.kappa == dispersion_index(a0, b0, c0, 30)
        done += 1


def test_selfadjoint_counts_match_hermitian_eigenvalues():
    rng = np.random.default_rng(420)
    for _ in range(4):
        spec = selfadjoint_spec(rng)
        A = assemble_A(spec, 10).entries
        assert np.linalg.norm(A - A.conj().T) < 1e-12
        cert = certified_index(spec, CertifyOptions(max_N=64))
        assert cert.status == "Certified"
        evs = np.linalg.eigvalsh(assemble_A(spec, cert.N_final).entries)
        assert np.min(np.abs(evs)) > 1e-3
        assert cert.kappa == int(np.sum(evs > 0))


def test_condition_not_met_when_cap_too_small():
    spec = benilov_coefficients(0.0, 1.0, 0.02)
    cert = certified_index(spec, CertifyOptions(max_N=64, max_iterations=2))
    assert cert.status == "ConditionNotMet"
    assert not cert.cond2_ok
    assert cert.N_final == 64
    # counts are still reported as a best effort
    assert cert.kappa_schur == 4
    assert cert.kappa_lyapunov == 4


def test_condition_not_met_when_delta_too_large():
    # M = 9 and N capped at 2 gives delta = 9/4 >= 1, so the tail
    # machinery cannot even produce an upper bound
    spec = constant_spec(9.0, 0.0, 1.0)
    cert = certified_index(spec, CertifyOptions(n_min=2, max_N=2, max_iterations=3))
    assert cert.status == "ConditionNotMet"
    assert cert.tripleU_upper is None
    assert cert.delta_N == pytest.approx(2.25)
    assert not cert.cond1_ok and not cert.cond2_ok


def test_axis_touch_reported_not_certified():
    # constant c = 1e-12 puts the mode-0 eigenvalue a hair off zero:
    # the Lyapunov pencil is numerically singular and the driver must
    # hand back the Schur count without a certificate
    spec = OperatorSpec(a=TrigPoly.zero(), b=TrigPoly.zero(), c=TrigPoly.constant(1e-12))
    cert = certified_index(spec)
    assert cert.status == "SpectraTouchAxis"
    assert cert.kappa_schur == 0
    assert cert.kappa_lyapunov is None


def test_axis_split_extracts_exact_imaginary_modes():
    # with alpha1 = 0 the rows p = -1, 0, 1 decouple into singletons
    # whose diagonal has exactly zero real part
    A = assemble_A(benilov_coefficients(0.0, 1.0, 0.5), 8).entries
    keep, axis = exact_axis_split(A)
    assert sorted((axis - 8).tolist()) == [-1, 0, 1]
    assert keep.size == A.shape[0] - 3
    for j in axis:
        assert A[j, j].real == 0.0

    # alpha1 != 0 couples modes +-1 back into the bulk, only p = 0 stays
    A2 = assemble_A(benilov_coefficients(0.3, 1.0, 0.5), 8).entries
    _, axis2 = exact_axis_split(A2)
    assert (axis2 - 8).tolist() == [0]

    # a strictly positive c leaves no structural axis at all
    A3 = assemble_A(constant_spec(0.0, 0.0, 1.0), 8).entries
    keep3, axis3 = exact_axis_split(A3)
    assert axis3.size == 0
    assert keep3.size == A3.shape[0]


def test_benilov_stable_windows_certify():
    cert = certified_index(benilov_coefficients(0.0, 1.0, 0.5))
    assert cert.status == "Certified"
    assert cert.kappa == 0
    assert cert.n_axis == 3

    cert2 = certified_index(benilov_coefficients(0.3, 1.0, 0.5))
    assert cert2.status == "Certified"
    assert cert2.kappa == 0
    assert cert2.n_axis == 1


def test_certificate_json_shape():
    spec = constant_spec(0.0, 0.0, -3.0)
    cert = certified_index(spec, CertifyOptions(max_N=48))
    d = cert.to_json_dict()
    expected = {
        "spec_digest",
        "M",
        "N_final",
        "delta_N",
        "c_N",
        "tripleU_upper",
        "cond1_ok",
        "cond2_ok",
        "kappa_schur",
        "kappa_lyapunov",
        "residual",
        "axis_gap",
        "status",
        "n_axis",
        "timestamp",
    }
    assert set(d.keys()) == expected
    assert d["spec_digest"] == spec.digest()
    assert isinstance(d["timestamp"], str) and d["timestamp"]
    assert cert.kappa == d["kappa_schur"]

    with_uinv = certified_index(spec, CertifyOptions(max_N=48, with_uinv=True))
    d2 = with_uinv.to_json_dict()
    assert set(d2.keys()) == expected | {"kappa_uinv"}
    assert d2["kappa_uinv"] == d2["kappa_schur"] == 3


def test_certificates_deterministic_up_to_timestamp():
    spec = benilov_coefficients(0.0, 1.0, 0.5)
    d1 = certified_index(spec).to_json_dict()
    d2 = certified_index(spec).to_json_dict()
    d1.pop("timestamp")
    d2.pop("timestamp")
    assert d1 == d2


def test_cross_validation_report():
    spec = benilov_coefficients(0.0, 1.0, 0.5)
    cert = certified_index(spec)
    report = cross_validate(cert, spec)
    assert report["kappa_cert"] == report["kappa_N"] == report["kappa_2N"] == 0
    assert report["kappa_stable"] is True
    assert report["projection_available"] is True
    # solved Lyapunov identity floor: smallest eigenvalue of
    # A_N^H U + U A_N stays above c_N up to roundoff
    assert report["lyap_min"] >= report["c_N"] - 1e-6
    assert report["lyap_ok"] is True
    assert report["inverse_norm"] <= report["inverse_bound"]
    assert report["inverse_ok"] is True
