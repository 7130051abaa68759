"""Operator perspectives, operator means and Ando-Hiai type inequality checks."""

from .matcore import (
    DimensionMismatch,
    DomainViolation,
    NonConvergence,
    PerspecError,
    Spectral,
    SupportViolation,
    SymMatrix,
    apply_fn,
    congruence,
    eigh,
    lambda_min,
    mat_pow,
    op_norm,
    support_projection,
)
from .funclib import (
    Adjoint,
    Affine,
    Dual,
    Geodesic,
    HalfSum,
    LogMean,
    NumericInverse,
    Power,
    ScalarFn,
    Subst,
    TPowTimes,
    Transpose,
    WeightedArith,
    WeightedHarm,
    classify,
    inverse_monotone,
    parse_fn,
)
from .perspective import (
    d_ratio,
    dotted_exp,
    eps_limit,
    kantorovich,
    log_euclidean,
    mean_sigma,
    perspective,
    perspective_singular,
    weighted_geo,
)
from .majorization import log_majorize, log_supermajorize, weak_log_majorize, weak_majorize

__version__ = "0.1.0"
