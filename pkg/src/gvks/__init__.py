"""2-D geometric knapsack with d-dimensional vector constraints.

Solvers for the unit-square knapsack over rectangular items carrying
profits and weight vectors: an exact DP and a PTAS for the Vector-Max-GAP
subproblem, NFDH shelf packing, container packing via reduction to the
GAP, an end-to-end container-configuration search, and brute-force
oracles that make the approximation guarantees testable at desk scale.
"""

from .containers import (
    ContainerPackingInstance,
    realize_assignment,
    reduce_to_vmg,
    solve_container_packing,
)
from .gap import (
    GapAssignment,
    GapInstance,
    GapItem,
    INFEASIBLE,
    StateBudgetError,
    solve_integral_dp,
    solve_integral_dp_with_stats,
)
from .gap_ptas import (
    RoundingScheme,
    assign_res_aug,
    round_instance,
    structural_decompose,
    trim,
    trim_small_solution,
    vmg_ptas,
)
from .model import (
    Container,
    Item,
    KnapsackInstance,
    Packing,
    Placement,
    SolverParams,
    TOL,
    Violation,
    container_config_valid,
    validate_packing,
)
from .nfdh import nfdh_pack, pack_small_greedy
from .oracle import (
    OracleBudget,
    OracleBudgetError,
    exact_container_packing,
    exact_gvks_small,
    exact_vmg,
)
from .solver import (
    CandidateDimensions,
    SolveResult,
    enumerate_container_configs,
    generate_candidate_dimensions,
    solve_gvks,
    solve_gvks_detailed,
)

__all__ = [
    "CandidateDimensions",
    "Container",
    "ContainerPackingInstance",
    "GapAssignment",
    "GapInstance",
    "GapItem",
    "INFEASIBLE",
    "Item",
    "KnapsackInstance",
    "OracleBudget",
    "OracleBudgetError",
    "Packing",
    "Placement",
    "RoundingScheme",
    "SolveResult",
    "SolverParams",
    "StateBudgetError",
    "TOL",
    "Violation",
    "assign_res_aug",
    "container_config_valid",
    "enumerate_container_configs",
    "exact_container_packing",
    "exact_gvks_small",
    "exact_vmg",
    "generate_candidate_dimensions",
    "nfdh_pack",
    "pack_small_greedy",
    "realize_assignment",
    "reduce_to_vmg",
    "round_instance",
    "solve_container_packing",
    "solve_gvks",
    "solve_gvks_detailed",
    "solve_integral_dp",
    "solve_integral_dp_with_stats",
    "structural_decompose",
    "trim",
    "trim_small_solution",
    "validate_packing",
    "vmg_ptas",
]

__version__ = "0.1.0"
