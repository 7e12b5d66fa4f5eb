"""gridpilot: a desk-scale grid voltage-security sandbox and dispatcher
autopilot - AC power flow, local stability indices, decision-tree
surrogates, corrective reactive dispatch, and a mode-driven control loop.
"""

__version__ = "0.1.0"

from .caseio import load_bundled_case, load_case, parse_case, save_case
from .network import (
    Branch,
    Bus,
    BusKind,
    CaseError,
    Generator,
    NetworkCase,
    Perturbation,
    PerturbationError,
    apply_perturbation,
    validate_connectivity,
)
from .powerflow import (
    AdmittanceMatrix,
    PowerFlowOptions,
    PowerFlowSolution,
    build_ybus,
    evaluate_mismatch,
    solve_power_flow,
)
from .stability import (
    BusPartition,
    FMatrix,
    LIndexReport,
    LoadabilityResult,
    SecurityClass,
    StabilityError,
    Thresholds,
    assess,
    classify_state,
    compute_f_matrix,
    compute_l_index,
    find_loadability_limit,
    partition_buses,
    partition_regulating,
)

__all__ = [
    "__version__",
    "AdmittanceMatrix",
    "Branch",
    "Bus",
    "BusKind",
    "BusPartition",
    "CaseError",
    "FMatrix",
    "Generator",
    "LIndexReport",
    "LoadabilityResult",
    "NetworkCase",
    "Perturbation",
    "PerturbationError",
    "PowerFlowOptions",
    "PowerFlowSolution",
    "SecurityClass",
    "StabilityError",
    "Thresholds",
    "apply_perturbation",
    "assess",
    "build_ybus",
    "classify_state",
    "compute_f_matrix",
    "compute_l_index",
    "evaluate_mismatch",
    "find_loadability_limit",
    "load_bundled_case",
    "load_case",
    "parse_case",
    "partition_buses",
    "partition_regulating",
    "save_case",
    "solve_power_flow",
    "validate_connectivity",
]
