"""0-1 knapsack subroutines.

``solve_kp_exact`` is an expanding-core dynamic program in the style of
Pisinger's Minknap: items are sorted by efficiency, the search starts from the
greedy split solution and the core grows one item at a time on each side.
States are kept as numpy arrays sorted by weight and filtered by (weight,
profit) dominance. Each state also remembers its leading item (smallest
canonical index it contains) so the run doubles as a PKP heuristic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import floor
from typing import Iterable, Optional

import numpy as np

from . import _kernels as kernels
from .model import EMPTY_SOLUTION, Instance, OverflowRisk, Solution, evaluate

_WORD = 64
_ONE = np.uint64(1)


@dataclass(frozen=True)
class KpResult:
    value: int
    selected: frozenset[int]
    min_leading_penalty: int
    first_item_index: int
    incumbent_value: int
    incumbent_lead: Optional[int]
    states_max: int = 0
    inst: Optional[Instance] = field(default=None, repr=False, compare=False)
    items: Optional[tuple[int, ...]] = field(default=None, repr=False, compare=False)

    @cached_property
    def incumbent_pkp(self) -> Solution:
        """Best PKP solution met during the search, rebuilt from its leading item."""
        if self.incumbent_lead is None:
            return EMPTY_SOLUTION
        sol = recover_solution(self.inst, self.incumbent_lead, self.items, value=self.incumbent_value)
        assert sol.value >= self.incumbent_value
        return sol


class _CoreSearch:
    """One expanding-core KP solve over a fixed item subset."""

    def __init__(self, inst: Instance, order: np.ndarray, capacity: int, floor: int = -1,
                 stop_at: Optional[int] = None):
        if not inst.overflow_safe:
            raise OverflowRisk("weight times profit products of this instance do not fit in int64")
        self.inst = inst
        self.idx = order
        self.P = inst.profits[order]
        self.W = inst.weights[order]
        self.n = len(order)
        self.c = capacity
        self.pen = np.append(inst.penalties, 0)
        self.none = inst.n
        lm = np.full(self.n + 1, self.none, dtype=np.int64)
        if self.n:
            lm[1:] = np.minimum.accumulate(np.minimum(order, self.none))
        self.left_lead = lm
        self.log: list[int] = []
        # only values above ``floor`` are of interest; ``stop_at`` is a known optimum
        self.z = floor
        self.stop_at = stop_at
        self.best_lead = -1
        self.snap = None
        self.inc_value = 0
        self.inc_lead: Optional[int] = None
        self.states_max = 0

    def _prices(self, a, b):
        """Slopes for the bounds: next item right of the core for fitting
        states, next item left of it for overweight ones."""
        pb, wb = (int(self.P[b + 1]), int(self.W[b + 1])) if b + 1 < self.n else (0, 1)
        pa, wa = (int(self.P[a - 1]), int(self.W[a - 1])) if a >= 1 else (0, 1)
        return pb, wb, a >= 1, pa, wa

    def _update(self):
        top, top_lead, pos, inc_v, inc_l = kernels.kp_best(self.nu, self.mu, self.lead, self.c,
                                                            self.left_lead[self.a], self.pen)
        if pos < 0:
            return
        if top > self.z or (top == self.z and top_lead > self.best_lead):
            self.z = int(top)
            self.best_lead = int(top_lead)
            self.snap = (int(top), int(self.mu[pos]), int(self.vect[pos]), len(self.log))
        if inc_v > self.inc_value:
            self.inc_value = int(inc_v)
            self.inc_lead = int(inc_l)

    def _reduce(self):
        self.nu, self.mu, self.lead, self.vect = kernels.kp_prune(
            self.nu, self.mu, self.lead, self.vect, self.c, self.z, *self._prices(self.a, self.b))

    def _merge(self, d: int, remove: bool):
        self.log.append(d)
        self.nu, self.mu, self.lead, self.vect = kernels.kp_merge(
            self.nu, self.mu, self.lead, self.vect, self.P[d], self.W[d], self.idx[d], remove)
        self.states_max = max(self.states_max, len(self.nu))

    def _enum_bound(self, d: int, remove: bool) -> bool:
        """True when some state with item d toggled may still beat the best value."""
        dp, dw = (-self.P[d], -self.W[d]) if remove else (self.P[d], self.W[d])
        return kernels.kp_any_survives(self.nu, self.mu, dp, dw, self.c, self.z, *self._prices(self.a, self.b))

    def run(self):
        n, c = self.n, self.c
        if n == 0:
            self.z, self.best_lead = 0, self.none
            self.snap = (0, 0, 0, 0)
            self.s = 0
            return
        cum_w = np.cumsum(self.W)
        over = np.flatnonzero(cum_w > c)
        s = int(over[0]) if len(over) else n - 1
        self.s = s
        p_split = int(self.P[:s].sum())
        w_split = int(self.W[:s].sum())
        self.a = self.b = s
        self.nu = np.array([p_split, p_split + self.P[s]], dtype=np.int64)
        self.mu = np.array([w_split, w_split + self.W[s]], dtype=np.int64)
        self.lead = np.array([self.none, self.idx[s]], dtype=np.int64)
        self.vect = np.array([0, 1], dtype=np.uint64)
        self.log.append(s)
        self.states_max = 2
        self._update()
        self._reduce()
        ps, ws = int(self.P[s]), int(self.W[s])
        while len(self.nu) and (self.a > 0 or self.b < n - 1):
            if self.stop_at is not None and self.z >= self.stop_at:
                break
            if self.a > 0:
                self.a -= 1
                d = self.a
                u0 = p_split - int(self.P[d]) + (c - w_split + int(self.W[d])) * ps // ws
                if u0 > self.z and self._enum_bound(d, remove=True):
                    self._merge(d, remove=True)
                    self._update()
                    self._reduce()
                else:
                    self.lead = np.minimum(self.lead, self.idx[d])
            if self.b < n - 1 and len(self.nu):
                self.b += 1
                d = self.b
                u1 = p_split + int(self.P[d]) + (c - w_split - int(self.W[d])) * ps // ws
                if u1 > self.z and self._enum_bound(d, remove=False):
                    self._merge(d, remove=False)
                    self._update()
                    self._reduce()

    def solution_positions(self) -> np.ndarray:
        """Positions (in efficiency order) of the recorded optimal state."""
        nu, _mu, vect, m = self.snap
        x = np.zeros(self.n, dtype=bool)
        if self.n == 0:
            return x
        x[: self.s] = True
        start = max(0, m - _WORD)
        for k, pos in enumerate(reversed(self.log[start:m])):
            if (vect >> k) & 1:
                x[pos] = not x[pos]
        unknown = self.log[:start]
        if unknown:
            x[unknown] = False
            room = self.c - int(self.W[x].sum())
            target = nu - int(self.P[x].sum())
            sub_pos = np.array(sorted(p for p in unknown if self.W[p] <= room), dtype=np.int64)
            sub = _CoreSearch(self.inst, self.idx[sub_pos], room, floor=target - 1, stop_at=target)
            sub.run()
            if sub.z != target:
                raise AssertionError(f"reconstruction mismatch: {sub.z} != {target}")
            chosen = set(sub.idx[sub.solution_positions()].tolist())
            for pos in unknown:
                if int(self.idx[pos]) in chosen:
                    x[pos] = True
        return x


def _order_for(inst: Instance, items: Optional[Iterable[int]], capacity: int) -> np.ndarray:
    order = inst.eff_order
    if items is not None:
        mask = np.zeros(inst.n, dtype=bool)
        mask[np.fromiter(items, dtype=np.int64)] = True
        order = order[mask[order]]
    return order[inst.weights[order] <= capacity]


def solve_kp_exact(inst: Instance, items: Optional[Iterable[int]] = None, capacity: Optional[int] = None,
                   reconstruct: bool = True, floor: int = -1, stop_at: Optional[int] = None) -> KpResult:
    """Exact 0-1 knapsack over ``items`` (canonical indices, default all) ignoring penalties.

    Besides the optimum it reports the leading item of the lowest-penalty
    optimal solution met (``first_item_index``; ``inst.n`` when that solution
    is empty) and the best profit-minus-max-penalty value of any feasible
    state created along the way.

    With ``reconstruct=False`` the item set is not rebuilt and ``selected`` is
    empty. A ``floor`` prunes every state that cannot exceed it; the caller
    must know some solution does. ``stop_at`` ends the search once a solution
    of that value is found and is only valid when it is the optimum.
    """
    c = inst.capacity if capacity is None else capacity
    if c < 0:
        raise ValueError("capacity must be non-negative")
    items_t = None if items is None else tuple(int(i) for i in items)
    search = _CoreSearch(inst, _order_for(inst, items_t, c), c, floor, stop_at)
    search.run()
    if search.snap is None:
        raise ValueError(f"no solution above the floor {floor}")
    value = search.z
    selected: frozenset[int] = frozenset()
    if reconstruct:
        x = search.solution_positions()
        selected = frozenset(search.idx[x].tolist())
        if int(search.P[x].sum()) != value:
            raise AssertionError(f"solution value {int(search.P[x].sum())} != optimum {value}")
    first = search.best_lead
    return KpResult(
        value=value,
        selected=selected,
        min_leading_penalty=int(search.pen[first]),
        first_item_index=first,
        incumbent_value=search.inc_value,
        incumbent_lead=search.inc_lead,
        states_max=search.states_max,
        inst=inst,
        items=items_t,
    )


def recover_solution(inst: Instance, lead: Optional[int], items: Optional[Iterable[int]] = None,
                     value: Optional[int] = None) -> Solution:
    """Best solution whose leading item is ``lead``: pack it, then solve the
    knapsack over the later items with the leftover capacity.

    With ``value`` (known to be reachable with this leading item) the
    knapsack search starts from it and stops at the first solution that
    reaches it, so the result is at least that good.
    """
    if lead is None or lead >= inst.n:
        return EMPTY_SOLUTION
    it = inst.items[lead]
    room = inst.capacity - it.weight
    if room < 0:
        raise ValueError(f"item {lead} does not fit")
    later = range(lead + 1, inst.n) if items is None else [i for i in items if i > lead]
    if value is None:
        rest = solve_kp_exact(inst, later, room)
    else:
        target = value - it.profit + it.penalty
        rest = solve_kp_exact(inst, later, room, floor=target - 1, stop_at=target)
    return evaluate(inst, rest.selected | {lead})


def _fptas_table(p: np.ndarray, w: np.ndarray, capacity: int, delta: Fraction, keep_table: bool):
    """Min weight per scaled profit level, plus the true profit of that set."""
    n = len(p)
    scale = max(1, floor(delta * int(p.max()) / n))
    q = p // scale
    total = int(q.sum())
    inf = np.iinfo(np.int64).max // 2
    min_w = np.full(total + 1, inf, dtype=np.int64)
    min_w[0] = 0
    real = np.zeros(total + 1, dtype=np.int64)
    table = [] if keep_table else None
    for k in range(n):
        qk = int(q[k])
        if qk == 0:
            if keep_table:
                table.append(None)
            continue
        cand = min_w[: total + 1 - qk] + w[k]
        gain = real[: total + 1 - qk] + p[k]
        better = cand < min_w[qk:]
        min_w[qk:] = np.where(better, cand, min_w[qk:])
        real[qk:] = np.where(better, gain, real[qk:])
        if keep_table:
            table.append(np.packbits(better))
    reach = np.flatnonzero(min_w <= capacity)
    level = int(reach[np.argmax(real[reach])])
    return q, level, int(real[level]), table


def _fptas_candidates(inst: Instance, items: Iterable[int], capacity: int):
    return [i for i in items if inst.items[i].weight <= capacity and inst.items[i].profit > 0]


def solve_kp_fptas(inst: Instance, items: Iterable[int], capacity: int, delta) -> tuple[int, frozenset[int]]:
    """(1 - delta)-approximate knapsack by profit scaling.

    Profits are divided by K = max(1, floor(delta * p_max / n)) and an exact
    min-weight table over the scaled profit levels is built. Items scaled to
    zero are left out; they cost less than delta * p_max in total.
    """
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    cand = _fptas_candidates(inst, items, capacity)
    if not cand:
        return 0, frozenset()
    q, level, value, table = _fptas_table(inst.profits[cand], inst.weights[cand], capacity, delta, True)
    chosen = []
    for k in range(len(cand) - 1, -1, -1):
        row, qk = table[k], int(q[k])
        if row is None or level < qk:
            continue
        bit = level - qk
        if (row[bit // 8] >> (7 - bit % 8)) & 1:
            chosen.append(cand[k])
            level -= qk
    assert level == 0 and int(inst.profits[chosen].sum()) == value
    return value, frozenset(chosen)


def fptas_value(inst: Instance, items: Iterable[int], capacity: int, delta) -> int:
    """Value-only variant of :func:`solve_kp_fptas` (no backtracking table)."""
    delta = Fraction(delta)
    cand = _fptas_candidates(inst, items, capacity)
    if not cand:
        return 0
    return _fptas_table(inst.profits[cand], inst.weights[cand], capacity, delta, False)[2]
