"""Pareto boundary of the Z interference channel under improper Gaussian
signaling, with threshold rules and brute-force cross-checks."""

from .model import (DomainError, RateTarget, TransmitParams, ZicScenario,
                    augmented_moments, optimal_kappa1_phi1, rate1_reduced,
                    rate2_reduced, rate_pair_general)
from .constraints import CapBranch, PowerCap, power_cap, q_value
from .thresholds import (MonotonicityCase, Regime, Region, ThresholdSet,
                         classify_regime, compute_thresholds,
                         improper_threshold, min_improper_threshold,
                         monotonicity_case, transition_alpha)
from .solver import (BoundaryPoint, Branch, Discontinuity, DiscontinuityKind,
                     ParetoBoundary, Spacing, detect_discontinuities,
                     kappa_max, max_improper_count, solve_point,
                     sweep_boundary, upper_hull)
from .oracle import (GridSpec, McSpec, grid_resolution_bound, grid_solve,
                     grid_validate_user1, mc_rate_estimate)

__all__ = [
    "DomainError", "RateTarget", "TransmitParams", "ZicScenario",
    "augmented_moments", "optimal_kappa1_phi1", "rate1_reduced",
    "rate2_reduced", "rate_pair_general",
    "CapBranch", "PowerCap", "power_cap", "q_value",
    "MonotonicityCase", "Regime", "Region", "ThresholdSet",
    "classify_regime", "compute_thresholds", "improper_threshold",
    "min_improper_threshold", "monotonicity_case", "transition_alpha",
    "BoundaryPoint", "Branch", "Discontinuity", "DiscontinuityKind",
    "ParetoBoundary", "Spacing", "detect_discontinuities", "kappa_max",
    "max_improper_count", "solve_point", "sweep_boundary", "upper_hull",
    "GridSpec", "McSpec", "grid_resolution_bound", "grid_solve",
    "grid_validate_user1", "mc_rate_estimate",
]
