"""Two-step exact algorithm.

Step 1 solves the plain knapsack problem, uses its optimum as an incumbent and
the per-item LP bounds to narrow the range of penalties a better solution can
have. Step 2 solves the remaining problem either with the basic DP or with an
expanding-core dynamic program whose states carry the penalty information
needed for PKP dominance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from . import _kernels as kernels
from .dp import best_leading_item
from .kp import recover_solution, solve_kp_exact
from .lp import bounds_pkp_j_plus_lp
from .model import Instance, OverflowRisk, PkpError, Solution


class TimeLimitReached(PkpError):
    pass


@dataclass(frozen=True)
class SolverParams:
    alpha: Optional[int] = 15  # None: compare against every lighter state
    t1: int = 5 * 10**9
    t2: Optional[int] = None  # None: n / 10
    t3: Optional[int] = 3 * 10**6  # None: never run the penalty-bound test
    time_limit: Optional[float] = 100.0

    def __post_init__(self):
        if self.alpha is not None and self.alpha < 1:
            raise ValueError("alpha must be >= 1")
        for name in ("t1", "t2", "t3"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class Incumbent:
    value: int
    lead: Optional[int]

    @classmethod
    def of(cls, sol: Solution) -> "Incumbent":
        return cls(sol.value, sol.leading_index)

    def better(self, other: "Incumbent") -> "Incumbent":
        return other if other.value > self.value else self


@dataclass(frozen=True)
class PenaltyInterval:
    l: int
    r: int
    pi_max: int
    pi_min: int
    empty: bool


@dataclass(frozen=True)
class ReducedProblem:
    """Items ``start..n-1`` of ``inst`` with the penalty floor ``pi_min``."""

    inst: Instance
    start: int
    pi_min: int

    @property
    def n(self) -> int:
        return self.inst.n - self.start


@dataclass(frozen=True)
class Step1Result:
    incumbent: Incumbent
    interval: PenaltyInterval
    reduced: Optional[ReducedProblem]
    kp_value: int
    first_item: int
    phases: tuple[int, ...]

    @property
    def proven(self) -> bool:
        return self.reduced is None


def _check_time(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise TimeLimitReached()


def step1(inst: Instance) -> Step1Result:
    """Knapsack solve plus LP-bound interval narrowing.

    Items before the leading item of the lowest-penalty KP optimum cannot lead
    a better solution; among the rest only those whose forced-in LP bound
    beats the incumbent are kept, which gives the window [l, r].
    """
    n = inst.n
    kp1 = solve_kp_exact(inst, reconstruct=False)
    inc = Incumbent(kp1.incumbent_value, kp1.incumbent_lead)
    phases = [inc.value]
    f = kp1.first_item_index
    none = PenaltyInterval(0, -1, 0, 0, True)
    if f >= n:
        return Step1Result(inc, none, None, kp1.value, f, tuple(phases))
    bounds = bounds_pkp_j_plus_lp(inst)
    live = [(b, j) for j, b in enumerate(bounds) if j >= f and b is not None]
    if not live or max(b for b, _ in live) <= inc.value:
        return Step1Result(inc, none, None, kp1.value, f, tuple(phases))
    top = max(b for b, _ in live)
    k = min(j for b, j in live if b == top)
    again = solve_kp_exact(inst, range(k, n), reconstruct=False)
    inc = inc.better(Incumbent(again.incumbent_value, again.incumbent_lead))
    phases.append(inc.value)
    above = [j for b, j in live if b > inc.value]
    if not above:
        return Step1Result(inc, none, None, kp1.value, f, tuple(phases))
    l, r = min(above), max(above)
    pi_max, pi_min = inst.items[l].penalty, inst.items[r].penalty
    interval = PenaltyInterval(l, r, pi_max, pi_min, False)
    return Step1Result(inc, interval, ReducedProblem(inst, l, pi_min), kp1.value, f, tuple(phases))


class Decision(Enum):
    FIX0 = 0
    FIX1 = 1
    ENTER = 2


@dataclass(frozen=True)
class DpState:
    nu: int
    mu: int
    pi_core: int
    pi_tot: int
    rho: int


class CoreWindow:
    """State list of the expanding-core DP on a reduced problem.

    Items are those of ``reduced`` that fit on their own, in efficiency order.
    Positions left of ``a`` are packed, positions right of ``b`` are not; the
    states enumerate the merged positions in between. Each state stores the
    smallest canonical index among its packed core items (``lead``), from
    which both its core penalty and its overall leading item follow.
    """

    def __init__(self, reduced: ReducedProblem, incumbent: Incumbent,
                 params: Optional[SolverParams] = None, deadline: Optional[float] = None):
        inst = reduced.inst
        if not inst.overflow_safe:
            raise OverflowRisk("weight times profit products of this instance do not fit in int64")
        self.inst = inst
        self.params = params or SolverParams()
        self.deadline = deadline
        self.pi_min = reduced.pi_min
        c = inst.capacity
        self.c = c
        # equal-efficiency items with low penalty sit at the split, so the
        # greedy start already has a good leading item
        order = inst.eff_order_low_penalty
        order = order[(order >= reduced.start) & (inst.weights[order] <= c)]
        self.idx = order
        self.P = inst.profits[order]
        self.W = inst.weights[order]
        self.m = len(order)
        self.none = inst.n
        self.pen = np.append(inst.penalties, 0)
        self.pen_pos = self.pen[order]
        lm = np.full(self.m + 1, self.none, dtype=np.int64)
        if self.m:
            lm[1:] = np.minimum.accumulate(order)
        self.left_lead = lm
        self.penalty_values = np.unique(np.append(inst.penalties, 0))
        self.z = incumbent.value
        self.z_lead = incumbent.lead
        self.z_history = [self.z]
        self.states_max = 0
        self._levels_at = None
        self.merged = np.zeros(self.m, dtype=bool)
        cum = np.cumsum(self.W)
        over = np.flatnonzero(cum > c)
        s = int(over[0]) if len(over) else max(self.m - 1, 0)
        self.split = s
        self.p_split = int(self.P[:s].sum())
        self.w_split = int(self.W[:s].sum())
        self.a = self.b = s
        if self.m == 0:
            self.nu = self.mu = self.lead = np.zeros(0, dtype=np.int64)
            return
        self.merged[s] = True
        self.nu = np.array([self.p_split, self.p_split + self.P[s]], dtype=np.int64)
        self.mu = np.array([self.w_split, self.w_split + self.W[s]], dtype=np.int64)
        self.lead = np.array([self.none, order[s]], dtype=np.int64)
        self._update_incumbent(self.nu, self.mu, self.lead)
        self._note_size()
        self.reduce()

    # -- small helpers -------------------------------------------------------

    def _rho(self, nu, lead):
        return nu - np.maximum(self.pen[lead], self.pi_min)

    def _note_size(self):
        self.states_max = max(self.states_max, len(self.nu))

    def states(self) -> list[DpState]:
        lead_tot = np.minimum(self.lead, self.left_lead[self.a])
        rho = self._rho(self.nu, self.lead)
        return [DpState(int(v), int(w), int(self.pen[ld]), int(self.pen[lt]), int(r))
                for v, w, ld, lt, r in zip(self.nu, self.mu, self.lead, lead_tot, rho)]

    def _update_incumbent(self, nu, mu, lead):
        best, lead_tot = kernels.best_penalized(nu, mu, lead, self.c, self.left_lead[self.a], self.pen)
        if lead_tot >= 0 and best > self.z:
            self.z = int(best)
            self.z_lead = int(lead_tot)
            self.z_history.append(self.z)

    def _prices(self, a, b):
        """Bound slopes: the next item right of the core prices spare
        capacity, the next item left of it prices excess weight."""
        pb, wb = (int(self.P[b + 1]), int(self.W[b + 1])) if b + 1 < self.m else (0, 1)
        pa, wa = (int(self.P[a - 1]), int(self.W[a - 1])) if a >= 1 else (0, 1)
        return pb, wb, a >= 1, pa, wa

    def _bound_keep(self, nu, mu, lead, a, b):
        """States whose integer bound (rho plus priced spare or excess
        capacity) exceeds the incumbent."""
        return kernels.cw_keep(nu, mu, lead, self.pen, self.pi_min, self.c, self.z, *self._prices(a, b))

    def _levels(self, b):
        if self._levels_at != b:
            lv = kernels.fill_levels(self.pen_pos[b + 1:], self.P[b + 1:])
            self._levels_cache = lv + kernels.lead_levels(self.pen, self.pi_min, lv[0], lv[1])
            self._levels_at = b
        return self._levels_cache

    def reduce(self):
        self.nu, self.mu, self.lead = kernels.cw_prune(self.nu, self.mu, self.lead, self.pen, self.pi_min, self.c,
                                                       self.z, *self._prices(self.a, self.b), *self._levels(self.b))

    # -- variable tests ------------------------------------------------------

    def variable_test(self, d: int) -> Decision:
        """Decide whether position ``d`` (just outside the core) must enter it."""
        c, ps, ws = self.c, int(self.P[self.split]), int(self.W[self.split])
        remove = d < self.split
        if remove:
            u0 = self.p_split - int(self.P[d]) - self.pi_min + (c - self.w_split + int(self.W[d])) * ps // ws
            if u0 <= self.z:
                return Decision.FIX1
            dp, dw, tag = -self.P[d], -self.W[d], self.none
            a, b = d, self.b
        else:
            u1 = (self.p_split + int(self.P[d]) - max(int(self.pen_pos[d]), self.pi_min)
                  + (c - self.w_split - int(self.W[d])) * ps // ws)
            if u1 <= self.z:
                return Decision.FIX0
            dp, dw, tag = self.P[d], self.W[d], self.idx[d]
            a, b = self.a, d
        if not kernels.cw_any_survives(self.nu, self.mu, self.lead, dp, dw, tag, self.pen, self.pi_min,
                                       self.c, self.z, *self._prices(a, b)):
            return Decision.FIX1 if remove else Decision.FIX0
        return Decision.ENTER

    # -- merge and dominance -------------------------------------------------

    def _dominated(self, nu, rho):
        alpha = self.params.alpha
        return kernels.dominated_mask(nu, rho, 0 if alpha is None else alpha)

    def _penalty_bound_drop(self, nu, mu, lead, rho):
        """States that only survive dominance through rho and whose bound,
        restricted to penalties that keep them undominated, is no better than
        the incumbent."""
        outside = ~self.merged
        fixed_in = outside.copy()
        fixed_in[self.split:] = False
        look = self.params.alpha if self.params.alpha is not None else len(nu)
        return kernels.penalty_bound_drop(nu, mu, lead, rho, look, self.penalty_values, outside, self.pen_pos,
                                          self.P, self.W, int(self.P[fixed_in].sum()), int(self.W[fixed_in].sum()),
                                          self.c, self.z, self.pen, self.pi_min)

    @staticmethod
    def _weight_order(nu, mu, rho, half):
        """Order by weight, then profit and rho descending (strongest first).

        Both halves normally satisfy this order already, so a linear merge
        does; the full sort only runs when a half does not.
        """
        order, ok = kernels.merge_order(mu, nu, rho, half)
        return order if ok else np.lexsort((-rho, -nu, mu))

    def merge_step(self, d: int, remove: bool):
        """Merge X and X + d, update the incumbent and prune dominated states."""
        p, w, tag = self.P[d], self.W[d], self.idx[d]
        self.merged[d] = True
        best, best_lead = kernels.shifted_best(self.nu, self.mu, self.lead, p, w, tag, remove, self.c,
                                               self.left_lead[self.a], self.pen)
        if best_lead >= 0 and best > self.z:
            self.z, self.z_lead = int(best), int(best_lead)
            self.z_history.append(self.z)
        alpha = self.params.alpha
        ok = False
        if alpha is not None:
            ok, nu, mu, lead, rho = kernels.cw_merge(self.nu, self.mu, self.lead, p, w, tag, remove, self.pen,
                                                     self.pi_min, alpha)
        if not ok:
            if remove:
                nu = np.concatenate((self.nu, self.nu - p))
                mu = np.concatenate((self.mu, self.mu - w))
                lead = np.concatenate((np.minimum(self.lead, tag), self.lead))
            else:
                nu = np.concatenate((self.nu, self.nu + p))
                mu = np.concatenate((self.mu, self.mu + w))
                lead = np.concatenate((self.lead, np.minimum(self.lead, tag)))
            rho = self._rho(nu, lead)
            order = self._weight_order(nu, mu, rho, len(self.nu))
            nu, mu, lead, rho = kernels.cw_dominance(nu, mu, lead, rho, order, 0 if alpha is None else alpha)
        t3 = self.params.t3
        if t3 is not None and len(nu) > t3:
            keep = ~self._penalty_bound_drop(nu, mu, lead, rho)
            nu, mu, lead = nu[keep], mu[keep], lead[keep]
        self.nu, self.mu, self.lead = nu, mu, lead
        self._note_size()

    def run(self) -> Incumbent:
        while len(self.nu) and (self.a > 0 or self.b < self.m - 1):
            _check_time(self.deadline)
            if self.a > 0:
                self.a -= 1
                d = self.a
                if self.variable_test(d) is Decision.ENTER:
                    self.merge_step(d, remove=True)
                    self.reduce()
                else:
                    self.lead = np.minimum(self.lead, self.idx[d])
            if self.b < self.m - 1 and len(self.nu):
                self.b += 1
                d = self.b
                if self.variable_test(d) is Decision.ENTER:
                    self.merge_step(d, remove=False)
                    self.reduce()
        return Incumbent(self.z, self.z_lead)


def _finish(inst: Instance, inc: Incumbent, certified: bool) -> Solution:
    sol = recover_solution(inst, inc.lead, value=inc.value)
    if sol.value < inc.value:
        raise AssertionError(f"recovered value {sol.value} below incumbent {inc.value}")
    return sol.with_certified(certified)


def dp2(reduced: ReducedProblem, incumbent: Union[Incumbent, Solution],
        params: Optional[SolverParams] = None, deadline: Optional[float] = None) -> Solution:
    """Optimum of the reduced problem, or the incumbent when nothing beats it."""
    if isinstance(incumbent, Solution):
        incumbent = Incumbent.of(incumbent)
    window = CoreWindow(reduced, incumbent, params, deadline)
    try:
        inc, certified = window.run(), True
    except TimeLimitReached:
        inc, certified = Incumbent(window.z, window.z_lead), False
    return _finish(reduced.inst, inc, certified)


@dataclass(frozen=True)
class SolveReport:
    solution: Solution
    step1_time: float
    step2_time: float
    step1_only: bool
    states_max: int
    used_dp1: bool


def run(inst: Instance, params: Optional[SolverParams] = None) -> SolveReport:
    """Full pipeline with timing and state statistics."""
    params = params or SolverParams()
    t0 = time.monotonic()
    deadline = None if params.time_limit is None else t0 + params.time_limit
    s1 = step1(inst)
    t1 = time.monotonic()
    inc = s1.incumbent
    certified = True
    used_dp1 = False
    states_max = 0
    if not s1.proven:
        red = s1.reduced
        t2 = params.t2 if params.t2 is not None else inst.n / 10
        width = s1.interval.r - s1.interval.l + 1
        if red.n * inst.capacity <= params.t1 and width >= t2:
            used_dp1 = True
            value, lead = best_leading_item(inst, start=red.start, budget=params.t1)
            inc = inc.better(Incumbent(value, lead))
        else:
            window = CoreWindow(red, inc, params, deadline)
            try:
                inc = window.run()
            except TimeLimitReached:
                inc, certified = Incumbent(window.z, window.z_lead), False
            states_max = window.states_max
    t2_ = time.monotonic()
    sol = _finish(inst, inc, certified)
    if certified and sol.value != inc.value:
        raise AssertionError(f"recovered value {sol.value} != optimum {inc.value}")
    return SolveReport(sol, t1 - t0, t2_ - t1, s1.proven, states_max, used_dp1)


def solve(inst: Instance, params: Optional[SolverParams] = None) -> Solution:
    """Certified optimal solution (non-certified only if the time limit hits)."""
    return run(inst, params).solution
