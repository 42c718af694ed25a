"""Existence classification and certified radial supersolutions for a
quasilinear Choquard-Hardy inequality on the exterior of the unit ball."""

from .beta_spectrum import (
    BetaRoots,
    RadialBump,
    SignCase,
    beta_star,
    g_eval,
    g_prime,
    hardy_check,
    sign_classification,
    solve_beta_roots,
)
from .classifier import (
    Outcome,
    Verdict,
    Witness,
    WITNESS_PREDICATES,
    classify,
    local_nonexistence,
    necessary_condition_trace,
    nonexistence_general,
)
from .construct_verify import (
    Certificate,
    Subcase,
    VerificationReport,
    VerifyGrid,
    calibrate_kappa,
    choose_gamma,
    choose_powerlog,
    existence_certificate,
    verify_supersolution,
)
from .errors import (
    BudgetExhausted,
    ChoquardHardyError,
    DomainError,
    EmptyInterval,
    NoRealRoots,
    QuadratureFailure,
    SingularPointError,
    ValidationError,
)
from .model import ComparisonPolicy, ProblemParams, hardy_constant, validate_params
from .radial_calculus import (
    ExpansionCoefficients,
    ProfileKind,
    RadialProfile,
    check_c1_integrability,
    expansion_coefficients,
    fd_radial_operator,
    operator_exact,
    operator_power,
    operator_powerlog_exact,
)
from .riesz import (
    BoundCase,
    PowerBound,
    PowerLowerBound,
    RadialFunction,
    RieszValue,
    gamma_fn,
    lower_bound_far,
    power_lower_bound,
    power_upper_bounds,
    riesz_constant,
    riesz_convolve_radial,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
