"""Numerical q-calculus: q-Mellin transforms, their inversion and q-analogues
of Ramanujan's Master Theorem, with a verification harness."""

from .errors import (
    BranchError,
    ConvergenceError,
    DivergenceError,
    EstimationError,
    HypothesisError,
    PoleError,
    QError,
    QOverflowError,
)
from .qcore import (
    QContext,
    Strip,
    k_q,
    q_beta,
    q_bracket,
    q_exp_lower,
    q_exp_upper,
    q_factorial,
    q_gamma,
    qpoch_finite,
    qpoch_infinite,
    qpoch_lattice,
    qpow,
)
from .qmellin import (
    IdentityReport,
    IdentitySample,
    MellinResult,
    jackson_integral,
    jackson_integral_improper,
    jackson_integral_inf,
    mera_partial,
    pi_over_sin,
    q_mellin,
    q_mellin_inverse,
    strip_estimate,
)
from .qseries import (
    CoefficientFunction,
    PointFunction,
    SeriesFamily,
    SeriesSpec,
    build_series,
    phi_rs,
    q_bessel3,
    q_cos,
    q_sin,
    sum_series,
)
from .rmt import ClosedForm, Finding, family_rhs, hypothesis_check, rmt1_rhs, rmt2_rhs, verify_identity

__version__ = "0.1.0"
