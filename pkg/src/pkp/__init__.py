"""Exact and approximate solvers for the 0-1 penalized knapsack problem.

Select items to maximize total profit minus the largest penalty among the
selected items, subject to a single capacity constraint.
"""

from .approx import ApproxCase, CaseKind, CaseViolated, make_inapprox_fixture, run_a_delta, select_delta
from .dp import BudgetExceeded, solve_dp1
from .exact import SolverParams, dp2, run, solve, step1
from .generator import GenSpec, generate
from .kp import KpResult, solve_kp_exact, solve_kp_fptas
from .lp import bound_chain_check, bounds_pkp_j_lp, bounds_pkp_j_plus_lp, lp_value_at, solve_lp
from .model import (CapacityExceeded, Instance, InstanceFormatError, InvalidItem, Item, OverflowRisk,
                    PkpError, Solution, canonicalize, evaluate, read_instance, write_instance)
from .oracle import TooLarge, brute_force

__all__ = [
    "ApproxCase", "BudgetExceeded", "CapacityExceeded", "CaseKind", "CaseViolated", "GenSpec",
    "Instance", "InstanceFormatError", "InvalidItem", "Item", "KpResult", "OverflowRisk", "PkpError",
    "Solution", "SolverParams", "TooLarge", "bound_chain_check", "bounds_pkp_j_lp",
    "bounds_pkp_j_plus_lp", "brute_force", "canonicalize", "dp2", "evaluate", "generate",
    "lp_value_at", "make_inapprox_fixture", "read_instance", "run", "run_a_delta", "select_delta",
    "solve", "solve_dp1", "solve_kp_exact", "solve_kp_fptas", "solve_lp", "step1", "write_instance",
]
