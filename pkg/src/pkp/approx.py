"""Approximation by trying every leading item with a KP FPTAS on the rest,
the step sizes that make it an FPTAS on four special classes, and the
hardness fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .kp import fptas_value, solve_kp_fptas
from .model import EMPTY_SOLUTION, Instance, PkpError, Solution, canonicalize, evaluate


class CaseViolated(PkpError):
    pass


class CaseKind(Enum):
    PROFIT_DOMINATES_PENALTY = "profit-dominates"
    PENALTY_BOUNDED_BY_C = "penalty-bounded"
    GAP_BOUNDED_BY_C = "gap-bounded"
    PROFIT_FLOOR = "profit-floor"


@dataclass(frozen=True)
class ApproxCase:
    """A special class with its parameter (``C`` or ``rho``) and target epsilon."""

    kind: CaseKind
    epsilon: Fraction
    C: Optional[int] = None
    rho: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.kind in (CaseKind.PENALTY_BOUNDED_BY_C, CaseKind.GAP_BOUNDED_BY_C):
            if self.C is None or self.C < 1:
                raise ValueError(f"{self.kind.value} needs an integer C >= 1")
        if self.kind is CaseKind.PROFIT_FLOOR:
            if self.rho is None:
                raise ValueError("profit-floor needs rho")
            object.__setattr__(self, "rho", Fraction(self.rho))
            if not Fraction(1, 2) < self.rho < 1:
                raise ValueError("rho must lie in (1/2, 1)")

    def violations(self, inst: Instance) -> list[int]:
        """Canonical indices of items breaking the class condition."""
        items = inst.items
        if self.kind is CaseKind.PROFIT_DOMINATES_PENALTY:
            return [j for j, it in enumerate(items) if it.profit < it.penalty]
        if self.kind is CaseKind.PENALTY_BOUNDED_BY_C:
            return [j for j, it in enumerate(items) if it.penalty + 1 > self.C]
        if self.kind is CaseKind.GAP_BOUNDED_BY_C:
            return [j for j, it in enumerate(items) if it.penalty - it.profit > self.C]
        if not items:
            return []
        pi_max = max(it.penalty for it in items)
        return [j for j, it in enumerate(items) if it.profit < self.rho * pi_max]

    def check(self, inst: Instance) -> None:
        bad = self.violations(inst)
        if bad:
            raise CaseViolated(f"{self.kind.value}: items {bad[:5]} violate the class condition")


def select_delta(case: ApproxCase, inst: Optional[Instance] = None) -> Fraction:
    """KP accuracy that makes the leading-item scheme (1 - epsilon)-accurate."""
    if inst is not None:
        case.check(inst)
    eps = case.epsilon
    if case.kind is CaseKind.PROFIT_DOMINATES_PENALTY:
        return eps
    if case.kind is CaseKind.PENALTY_BOUNDED_BY_C:
        return eps / case.C
    if case.kind is CaseKind.GAP_BOUNDED_BY_C:
        return eps / (case.C + 1)
    return eps * (2 * case.rho - 1) / case.rho


def run_a_delta(inst: Instance, delta) -> Solution:
    """Best over all leading items j of p_j - pi_j plus a (1 - delta) KP
    solution on items after j with capacity c - w_j; never below the empty set."""
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    c = inst.capacity
    best, lead = 0, None
    for j, it in enumerate(inst.items):
        if it.weight > c:
            continue
        val = it.profit - it.penalty + fptas_value(inst, range(j + 1, inst.n), c - it.weight, delta)
        if val > best:
            best, lead = val, j
    if lead is None:
        return EMPTY_SOLUTION
    it = inst.items[lead]
    rest_value, rest = solve_kp_fptas(inst, range(lead + 1, inst.n), c - it.weight, delta)
    sol = evaluate(inst, rest | {lead})
    assert sol.value == best == it.profit - it.penalty + rest_value
    return sol


def make_inapprox_fixture(M: Optional[int] = None, ssp_weights: Optional[Sequence[int]] = None,
                          target: Optional[int] = None) -> Instance:
    """Hardness instances.

    With ``M``: two items p = w = M/2 + 1, penalty M/2, capacity M; only one
    fits, so the optimum is 1. With ``ssp_weights`` and ``target``: every
    item has p = w = its weight and penalty target - 1, capacity target; the
    optimum is 1 exactly when some subset sums to the target, else 0.
    """
    if ssp_weights is not None:
        if target is None or target < 1:
            raise ValueError("subset-sum fixture needs a positive target")
        if any(w < 1 for w in ssp_weights):
            raise ValueError("subset-sum weights must be positive")
        raw = [(w, w, target - 1) for w in ssp_weights]
        return canonicalize(raw, target, label=f"ssp_{target}")
    if M is None or M < 4 or M % 2:
        raise ValueError("M must be an even integer >= 4")
    h = M // 2
    return canonicalize([(h + 1, h + 1, h), (h + 1, h + 1, h)], M, label=f"gap_{M}")


def subset_sum_solvable(weights: Sequence[int], target: int) -> bool:
    """Plain reachability check used to label the subset-sum fixtures."""
    reach = 1
    for w in weights:
        reach |= reach << w
    return bool((reach >> target) & 1)
