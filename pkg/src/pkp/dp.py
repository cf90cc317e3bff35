"""Basic pseudo-polynomial algorithm: one KP dynamic program over items in
increasing penalty order, trying each item as the leading item on the way."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .kp import recover_solution
from .model import EMPTY_SOLUTION, Instance, PkpError, Solution

DEFAULT_BUDGET = 5 * 10**9


class BudgetExceeded(PkpError):
    pass


def best_leading_item(inst: Instance, start: int = 0, capacity: Optional[int] = None,
                      budget: int = DEFAULT_BUDGET) -> tuple[int, Optional[int]]:
    """Best (value, leading item) over solutions built from items start..n-1.

    ``F`` holds the KP optimum over the items already processed (all with a
    penalty no larger than the next one), so ``F[c - w_j] + p_j - pi_j`` is
    the best solution led by item j. Returns ``(0, None)`` when nothing beats
    the empty set.
    """
    c = inst.capacity if capacity is None else capacity
    count = inst.n - start
    if count * c > budget:
        raise BudgetExceeded(f"n*c = {count * c} exceeds the budget {budget}")
    F = np.zeros(c + 1, dtype=np.int64)
    best, lead = 0, None
    for j in range(inst.n - 1, start - 1, -1):
        it = inst.items[j]
        w = it.weight
        if w > c:
            continue
        cand = int(F[c - w]) + it.profit - it.penalty
        # scanning towards smaller indices; >= keeps the smallest leading index on ties
        if cand > best or (cand == best and lead is not None):
            best, lead = cand, j
        if it.profit:
            np.maximum(F[w:], F[:-w] + it.profit, out=F[w:])
    return best, lead


def solve_dp1(inst: Instance, budget: int = DEFAULT_BUDGET) -> Solution:
    """Exact PKP optimum in O(n c) time and O(c) memory.

    The item set is rebuilt by a knapsack solve over the items after the
    leading one.
    """
    value, lead = best_leading_item(inst, budget=budget)
    if lead is None:
        return EMPTY_SOLUTION.with_certified(True)
    sol = recover_solution(inst, lead, value=value)
    if sol.value != value:
        raise AssertionError(f"recovered value {sol.value} != table value {value}")
    return sol.with_certified(True)
