"""Optimal linear contracts for multi-agent projects under pay-equity constraints."""

from .contracts import (
    Contract,
    IncentiveOutcome,
    Instance,
    ModeSpec,
    best_response_step,
    group_payment_nd,
    indifference_payment,
    is_equilibrium,
    optimal_contract_for_set,
)
from .errors import FairpayError
from .experiments import (
    RatioRecord,
    SweepSpec,
    VerifyReport,
    geometric_solve,
    pond_ratio,
    run_sweep,
    solve_with,
    verify_bounds,
)
from .families import gen_geometric_family, gen_random, gen_two_agent_tight, gen_two_class
from .rewards import (
    Additive,
    CappedAdditive,
    Coverage,
    ExplicitTable,
    RewardFunction,
    StructureReport,
    SymmetricTwoClass,
    check_structure,
    mask_to_indices,
)
from .solvers import (
    PartitionResult,
    SolveReport,
    brute_force,
    delta_partition,
    log_partition,
    symmetric_solve,
    two_agent_bound,
    two_agent_solve,
)

__version__ = "0.1.0"

__all__ = [
    "Additive",
    "CappedAdditive",
    "Contract",
    "Coverage",
    "ExplicitTable",
    "FairpayError",
    "IncentiveOutcome",
    "Instance",
    "ModeSpec",
    "PartitionResult",
    "RatioRecord",
    "RewardFunction",
    "SolveReport",
    "StructureReport",
    "SweepSpec",
    "SymmetricTwoClass",
    "VerifyReport",
    "best_response_step",
    "brute_force",
    "check_structure",
    "delta_partition",
    "gen_geometric_family",
    "gen_random",
    "gen_two_agent_tight",
    "gen_two_class",
    "geometric_solve",
    "group_payment_nd",
    "indifference_payment",
    "is_equilibrium",
    "log_partition",
    "mask_to_indices",
    "optimal_contract_for_set",
    "pond_ratio",
    "run_sweep",
    "solve_with",
    "symmetric_solve",
    "two_agent_bound",
    "two_agent_solve",
    "verify_bounds",
]
