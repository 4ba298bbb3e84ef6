"""Household fertility/investment decision engine.

Static strategy solvers, a stop/grow dynamic program under loss-averse
utility with gendered aspiration references, and a registry of reproducible
counterfactual scenarios.
"""

__version__ = "0.1.0"

from .core import (
    AVERAGE_HC,
    PARENT_HC,
    Calibration,
    CostParams,
    FamilyState,
    Household,
    InfeasibleError,
    Model,
    ProductionParams,
    ReferenceSpec,
    RegimeSpec,
    calibration_from_dict,
    cell_seed,
    load_calibration,
    log_mean_hc,
    max_feasible_children,
    sample_log_shocks,
)
from .dp import (
    Action,
    PolicyTable,
    StopValue,
    decision_at,
    enumerate_policies_oracle,
    optimal_stop_value,
    solve_dp,
)
from .montecarlo import ShockPanel, mc_expected_utility
from .static_solver import (
    StaticSolution,
    ThresholdResult,
    rational_threshold,
    solve_static,
    static_sweep,
    threshold_curve,
)
from .utility import (
    ChildPlan,
    GainValue,
    m1_success_prob,
    m2_static_utility,
    m3_expected_utility,
    m4b_child_value,
    m4b_family_utility,
)

__all__ = [
    "__version__",
    "AVERAGE_HC",
    "PARENT_HC",
    "Action",
    "Calibration",
    "ChildPlan",
    "CostParams",
    "FamilyState",
    "GainValue",
    "Household",
    "InfeasibleError",
    "Model",
    "PolicyTable",
    "ProductionParams",
    "ReferenceSpec",
    "RegimeSpec",
    "ShockPanel",
    "StaticSolution",
    "StopValue",
    "ThresholdResult",
    "calibration_from_dict",
    "cell_seed",
    "decision_at",
    "enumerate_policies_oracle",
    "load_calibration",
    "log_mean_hc",
    "m1_success_prob",
    "m2_static_utility",
    "m3_expected_utility",
    "m4b_child_value",
    "m4b_family_utility",
    "max_feasible_children",
    "mc_expected_utility",
    "optimal_stop_value",
    "rational_threshold",
    "sample_log_shocks",
    "solve_dp",
    "solve_static",
    "static_sweep",
    "threshold_curve",
]
