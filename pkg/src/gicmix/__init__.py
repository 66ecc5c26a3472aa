"""Capacity analysis of the 3-user Gaussian interference channel under mixed
strong / very strong interference: regime classification, rate-region
polytopes, constraint-redundancy checks, and Monte Carlo validation of the
decode-first-then-MAC scheme."""

from .channel import (
    ChannelConfig,
    ChannelConfigError,
    LinkRegime,
    MixedAssignment,
    Strength,
    classify_link,
    find_mixed_assignments,
    less_noisy_margin,
    parse_config,
)
from .region import (
    GEOM_TOL,
    BoundComparison,
    HalfSpace,
    RatePolytope,
    ReceiverReduction,
    ReductionReport,
    RegimeError,
    UnboundedRegionError,
    all_strong_outer_bound,
    capacity_region,
    check_mixed_hypotheses,
    constraint_is_redundant,
    contains_point,
    enumerate_vertices,
    inner_region,
    mac_region,
    outer_bound,
    rate_bound,
    region_from_dict,
    region_to_dict,
    regions_equal,
    retained_maximum,
    verify_reduction,
)
from .sim import (
    AchievabilityVerdict,
    Codebook,
    JointSearchBudgetError,
    SimParams,
    SimReport,
    TrialOutcome,
    draw_codebooks,
    estimate_error_rate,
    predicted_achievable,
    run_trial,
)
from .cli import dumps17, figure2_config, main, sample_configs

__all__ = [
    "ChannelConfig", "ChannelConfigError", "LinkRegime", "MixedAssignment",
    "Strength", "classify_link", "find_mixed_assignments", "less_noisy_margin",
    "parse_config",
    "GEOM_TOL", "BoundComparison", "HalfSpace", "RatePolytope",
    "ReceiverReduction", "ReductionReport", "RegimeError",
    "UnboundedRegionError", "all_strong_outer_bound", "capacity_region",
    "check_mixed_hypotheses", "constraint_is_redundant", "contains_point",
    "enumerate_vertices", "inner_region", "mac_region", "outer_bound",
    "rate_bound", "region_from_dict", "region_to_dict", "regions_equal",
    "retained_maximum", "verify_reduction",
    "AchievabilityVerdict", "Codebook", "JointSearchBudgetError", "SimParams",
    "SimReport", "TrialOutcome", "draw_codebooks", "estimate_error_rate",
    "predicted_achievable", "run_trial",
    "dumps17", "figure2_config", "main", "sample_configs",
]

__version__ = "0.1.0"
