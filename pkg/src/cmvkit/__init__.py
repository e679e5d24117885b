"""Unitary five-diagonal truncations of measures on the unit circle.

The package turns a sequence of disk coefficients into finite unitary
truncations, computes their spectra, classifies which spectral points
persist across consecutive orders, evaluates closed-form arc bounds on
where the underlying measure can live, and builds quadrature rules and
rational approximants from the same data.
"""

from .caratheodory import (
    CONVERGENCE_SCENARIOS,
    ApproximantValue,
    CfScenario,
    QuadratureRule,
    approximant_routes,
    cf_approximant,
    modified_approximant,
    oracle_F,
    oracle_moments,
    resolvent_value,
    scenario_rows,
    szego_rule,
)
from .circle import Arc, FiniteSpectrum, UnitPoint, make_arc, principal_angle, set_distance
from .cmv import (
    BandedUnitary,
    JacobiBand,
    build_cmv,
    build_jacobi,
    build_truncation,
    cofinite_params,
    solve_shifted,
    theta_block,
)
from .eig import SpectrumResult, eigen_unitary, newton_refine, sigma_n
from .errors import (
    BranchPointError,
    CmvError,
    DegenerateCombinationError,
    DomainError,
    NonConvergenceError,
    PoleError,
    SingularShiftError,
    StationaryPointError,
    ValidationError,
)
from .opuc import (
    ConstU,
    MixedU,
    PhaseU,
    PolyEval,
    WRecurrence,
    eval_para,
    eval_phi_pair,
    eval_second_kind,
    gen_u_sequence,
    para_batch,
    para_coefficients,
    parse_u_spec,
    phi_coefficients,
    uv_transform,
)
from .schur import (
    Constant,
    Explicit,
    Parity,
    ParamPrefix,
    PrimeRule,
    RandomArc,
    RandomHalfPlane,
    RandomSet,
    Rotated,
    Rule,
    SchurSpec,
    ShiftedScaled,
    SplitMix64,
    TwoPeriodic,
    expand,
    format_complex,
    format_float,
    k_metric,
    parse_complex,
    parse_schur_spec,
    rho,
    rotate,
)
from .support import (
    ArcBound,
    DiagonalLimitData,
    GapRefinement,
    LimitSetEstimate,
    SupportCandidate,
    SupportEstimate,
    approximate_support,
    best_halfplane,
    bound_band,
    bound_diagonal,
    bound_halfplane,
    bound_ratio,
    bound_two_periodic,
    bound_weak_limit,
    double_limit_filter,
    estimate_alpha0,
    estimate_limit_set,
    projection_norm,
)

__version__ = "0.1.0"
