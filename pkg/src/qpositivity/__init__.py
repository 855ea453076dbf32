"""Numerics for q-series kernels and certificates of their positive definiteness."""

from .errors import (
    BadTau,
    CutoffInsufficient,
    DimMismatch,
    DomainViolation,
    NonFinite,
    NumericalFailure,
    PoleAtB,
    PoleAtNonpositiveInteger,
    QPositivityError,
    TruncationExceeded,
    ZeroArgument,
)
from .qkernel import (
    DEFAULT_POLICY,
    EvalResult,
    TruncationPolicy,
    phi11,
    q_gamma,
    qpoch_fin,
    qpoch_inf,
    ramanujan_Aq,
    theta4_product,
    theta4_series,
    theta4_vtau,
)

__version__ = "0.1.0"
