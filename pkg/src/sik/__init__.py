"""Certified instability index for fourth-order periodic differential operators.

The package computes kappa(A), the number of right-half-plane eigenvalues
(with multiplicity) of A[h] = -h'''' - (a h)'' + (b h)' - c h on periodic
functions, and certifies via a truncated Lyapunov equation that the finite
answer equals the infinite-dimensional one.
"""

from .errors import (
    ConfigError,
    DegenerateRestriction,
    DeltaTooLarge,
    MaxTruncationExceeded,
    NearSingularPencil,
    NeutralVectorEncountered,
    NonHermitianInput,
    SingularSystem,
)
from .fourier_core import (
    Kernel2D,
    TrigPoly,
    kernel2d_sobolev_norm,
    leibnitz_constant,
    sobolev_norm,
    tp_derivative,
    tp_multiply,
)
from .operator_assembly import (
    OperatorSpec,
    SpectralMatrix,
    assemble_A,
    assemble_A_star,
    benilov_coefficients,
    constant_M,
    d_weights,
    sector_params,
)
from .lyapunov import (
    GreenKernel,
    LyapunovSolution,
    green_kernel,
    kernel_operator_convert,
    solve_finite_lyapunov,
    solve_lyapunov_core,
)
from .norms_estimates import (
    TailReport,
    estimate_triple_U,
    lambda_max_statistic,
    tail_bound,
    triple_norm,
)
from .index import (
    Inertia,
    addition_rule_check,
    count_half_plane,
    indefinite_gram_schmidt,
    inertia_hermitian,
    instability_index_general,
    u_orth_complement,
)
from .certify import (
    Certificate,
    CertifyOptions,
    certified_index,
    cross_validate,
)
from .oracle import (
    DispersionOracle,
    dispersion_index,
    kronecker_lyapunov,
    validation_suite,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CertifyOptions",
    "ConfigError",
    "DegenerateRestriction",
    "DeltaTooLarge",
    "DispersionOracle",
    "GreenKernel",
    "Inertia",
    "Kernel2D",
    "LyapunovSolution",
    "MaxTruncationExceeded",
    "NearSingularPencil",
    "NeutralVectorEncountered",
    "NonHermitianInput",
    "OperatorSpec",
    "SingularSystem",
    "SpectralMatrix",
    "TailReport",
    "TrigPoly",
    "addition_rule_check",
    "count_half_plane",
    "assemble_A",
    "assemble_A_star",
    "benilov_coefficients",
    "certified_index",
    "constant_M",
    "cross_validate",
    "d_weights",
    "dispersion_index",
    "estimate_triple_U",
    "green_kernel",
    "indefinite_gram_schmidt",
    "inertia_hermitian",
    "instability_index_general",
    "kernel2d_sobolev_norm",
    "kernel_operator_convert",
    "kronecker_lyapunov",
    "lambda_max_statistic",
    "leibnitz_constant",
    "sector_params",
    "sobolev_norm",
    "solve_finite_lyapunov",
    "solve_lyapunov_core",
    "tail_bound",
    "tp_derivative",
    "tp_multiply",
    "triple_norm",
    "u_orth_complement",
    "validation_suite",
]
