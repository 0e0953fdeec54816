"""Order estimates of Kolmogorov n-widths of intersections of mixed-norm balls.

The estimate for the width of an intersection of balls nu_a * B_{p_a,theta_a}
in the (q, sigma) mixed norm (2 <= q, sigma < inf, n <= m*k/2) is the minimum
of eight candidate values: the best single ball, the best interpolated pair
crossing one of the distinguished reciprocal levels, and the best triple
whose reciprocal triangle captures a distinguished point.  The package also
ships the constructive lower-bound witness search, exact and heuristic width
oracles, and randomized verification suites.
"""

from .exponents import (
    Exponent,
    ReciprocalPoint,
    Weight,
    barycentric,
    convex_combine,
    critical_deviation,
    is_general_position,
    parse_exponent,
    perturb_to_general_position,
    solve_critical_crossing,
    solve_crossing,
)
from .norms import (
    corollary_check,
    interpolation_check,
    membership,
    mixed_norm,
    sample_boundary,
)
from .oracles import (
    WidthSample,
    exact_width_euclidean_ball,
    exact_width_linf,
    numeric_width_estimate,
    sup_norm_over_M,
)
from .phi import Dimensions, PhiValue, TargetSpace, omega, phi, single_ball_width_estimate
from .psi import (
    BallSpec,
    Certificate,
    Instance,
    PsiEstimate,
    family_reduce,
    psi,
    psi_component,
    validate_instance,
)
from .verify import SUITE_NAMES, SuiteResult, run_suites
from .witness import (
    GroupElement,
    WitnessSpec,
    best_witness_lower_bound,
    group_apply,
    solve_rl_loglinear,
    v_extreme_point,
    v_inclusion_scale,
    v_width_lower_bound,
)

__all__ = [
    "BallSpec",
    "Certificate",
    "Dimensions",
    "Exponent",
    "GroupElement",
    "Instance",
    "PhiValue",
    "PsiEstimate",
    "ReciprocalPoint",
    "SUITE_NAMES",
    "SuiteResult",
    "TargetSpace",
    "Weight",
    "WidthSample",
    "WitnessSpec",
    "barycentric",
    "best_witness_lower_bound",
    "convex_combine",
    "corollary_check",
    "critical_deviation",
    "exact_width_euclidean_ball",
    "exact_width_linf",
    "family_reduce",
    "group_apply",
    "interpolation_check",
    "is_general_position",
    "membership",
    "mixed_norm",
    "numeric_width_estimate",
    "omega",
    "parse_exponent",
    "perturb_to_general_position",
    "phi",
    "psi",
    "psi_component",
    "run_suites",
    "sample_boundary",
    "single_ball_width_estimate",
    "solve_critical_crossing",
    "solve_crossing",
    "sup_norm_over_M",
    "v_extreme_point",
    "v_inclusion_scale",
    "v_width_lower_bound",
    "validate_instance",
]

__version__ = "0.1.0"
