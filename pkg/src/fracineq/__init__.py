"""Numerical verification of fractional Montgomery identities and
Ostrowski-type bounds built on Riemann-Liouville integrals."""
from .bounds import (
    BoundReport,
    cor1_check,
    cor2_check,
    midpoint_chain,
    lambda_zero_rhs,
    thm1_check,
    thm2_check,
    thm3_check,
    thm3_exact_rhs,
    thm3_printed_rhs,
)
from .corpus import DEFAULT_FUNCTIONS, TestFunction, builtin, linear_combination, scaled, validate_convexity
from .errors import (
    CatalogError,
    ConfigError,
    ConvergenceError,
    DomainError,
    FracIneqError,
    PreconditionError,
    SingularityError,
    UnsupportedError,
)
from .identities import (
    TermBreakdown,
    generalized_residual,
    generalized_terms,
    identity_terms,
    montgomery_residual,
    montgomery_terms,
    rhs_representation,
)
from .kernels import j3_moment, j4_moment, moment_left, moment_right, p1, p2, p3
from .oracle import poly_rl_exact, poly_weighted_exact
from .quad import DEFAULT_CONFIG, Interval, QuadratureConfig, adaptive_oracle, gauss_jacobi, rl_integral, weighted_integral
from .specfun import beta, gamma, logbeta, loggamma
from .sweep import SweepConfig, SweepReport, parse_config, run_sweep, to_csv, to_json

__version__ = "0.1.0"
