"""Exact-arithmetic laboratory for parametric geometry of numbers.

The exact core (systems, families, exponents, checks, independence, cf)
imports eagerly; the float oracle (``pgnlab.minima``) and the renderer
(``pgnlab.plotting``) stay behind explicit submodule imports because they
pull in numpy and matplotlib.
"""

from .rationals import (
    INF,
    NEG_INF,
    ext_sub,
    format_extended,
    format_fraction,
    is_finite,
    parse_extended,
    parse_fraction,
)
from .systems import (
    NO_EXTENSION,
    DivisionPointKind,
    DomainError,
    Extension,
    PLSystem,
    PointGroup,
    RisingBlock,
    ValidationReport,
    Violation,
)
from .families import (
    CrossCheckEntry,
    CrossCheckReport,
    FamilyAParams,
    FamilyBParams,
    ParamError,
    ShiftedPairReport,
    build_family_a,
    build_family_a_infinite,
    build_family_b,
    build_uniform,
    crosscheck_printed_formulas,
    default_params_b,
    infinite_p1_ratio_max,
    infinite_top_ratio_limit,
    infinite_top_ratio_min,
    shifted_pair_divergence,
)
from .exponents import (
    ExponentProfile,
    InsufficientDataError,
    RatioExtrema,
    SampledProfile,
    component_extrema_periodic,
    export_division_table,
    profile_periodic,
    profile_sampled,
    ratio_extrema_periodic,
    write_division_csv,
)
from .checks import (
    CheckOutcome,
    check_profile,
    german_interval,
    growth_bound_at,
    jarnik_1938_interval,
    outcomes_to_json,
    verify_growth_bound,
)
from .independence import (
    ParamPoint,
    RankCertificate,
    default_point,
    jacobian_rank,
    peak_ratio_map,
    specialized_closed_forms,
    uniform_exponent_map,
)
from .cf import (
    cf_fraction,
    convergent_denominators,
    convergents,
    parse_cf,
    two_system_from_cf,
)

__version__ = "0.1.0"
