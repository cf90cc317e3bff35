"""LP relaxation bounds, all computed in exact rational arithmetic.

``LpValue`` is :class:`fractions.Fraction`; every bound comparison against an
integer incumbent is therefore exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .model import Instance

LpValue = Fraction


def _cap(penalty: int, pi: Fraction) -> Fraction:
    # zero-penalty items never bind the penalty constraint
    if penalty == 0 or pi >= penalty:
        return Fraction(1)
    return pi / penalty


def lp_value_at(inst: Instance, pi) -> Fraction:
    """Value of the relaxation with the deducted penalty fixed to ``pi``."""
    pi = Fraction(pi)
    if pi < 0:
        raise ValueError("pi must be non-negative")
    room = Fraction(inst.capacity)
    value = Fraction(0)
    for j in inst.eff_order:
        it = inst.items[j]
        x = _cap(it.penalty, pi)
        if x == 0:
            continue
        if it.weight * x <= room:
            room -= it.weight * x
            value += it.profit * x
        else:
            value += it.profit * room / it.weight
            break
    return value - pi


def _lines(inst: Instance, low: int):
    """Per item in efficiency order: (w_slope, w_const, p_slope, p_const).

    Items with penalty <= ``low`` are capped at 1, the others at pi/penalty,
    which is the shape of the caps for every pi in the open interval above ``low``.
    """
    out = []
    for j in inst.eff_order:
        it = inst.items[j]
        if it.penalty <= low:
            out.append((0, it.weight, 0, it.profit, j))
        else:
            out.append((Fraction(it.weight, it.penalty), 0, Fraction(it.profit, it.penalty), 0, j))
    return out


def _left_slope(inst: Instance, v: int) -> Fraction:
    """Slope of the linear piece immediately to the left of pi = v (v > 0)."""
    g1 = g2 = t1 = 0
    c = inst.capacity
    for j in inst.eff_order:
        it = inst.items[j]
        if it.penalty >= v and it.penalty > 0:
            a, b = Fraction(it.weight, it.penalty), 0
        else:
            a, b = 0, it.weight
        if (g1 + a) * v + g2 + b > c:
            eff = Fraction(it.profit, it.weight)
            return t1 - eff * g1 - 1
        g1 += a
        g2 += b
        if a:
            t1 += Fraction(it.profit, it.penalty)
    return t1 - 1


def _sweep_interval(inst: Instance, lo: int, hi: Optional[int]):
    """Best (pi, value) over [lo, hi] by trying every item as the split item."""
    c = inst.capacity
    g1 = g2 = t1 = t2 = Fraction(0)
    best: Optional[tuple[Fraction, Fraction]] = None

    def consider(bounds_lo, bounds_hi, slope, const):
        nonlocal best
        if bounds_lo > bounds_hi:
            return
        pi = bounds_lo if slope < 0 else bounds_hi
        val = slope * pi + const
        if best is None or val > best[1] or (val == best[1] and pi < best[0]):
            best = (pi, val)

    top = Fraction(hi) if hi is not None else Fraction(lo)
    for (a, b, ta, tb, j) in _lines(inst, lo):
        it = inst.items[j]
        left, right = Fraction(lo), top
        # prefix must fit: g1*pi + g2 <= c
        if g1 > 0:
            right = min(right, (c - g2) / g1)
        elif g2 > c:
            left, right = Fraction(1), Fraction(0)
        # remaining room must not exceed the split item's cap
        if it.penalty <= lo or it.penalty == 0:
            # g1*pi >= c - g2 - w
            need = c - g2 - it.weight
            if g1 > 0:
                left = max(left, need / g1)
            elif need > 0:
                left, right = Fraction(1), Fraction(0)
        else:
            k = g1 + Fraction(it.weight, it.penalty)
            left = max(left, (c - g2) / k)
        eff = Fraction(it.profit, it.weight)
        consider(left, right, t1 - eff * g1 - 1, t2 + eff * (c - g2))
        g1 += a
        g2 += b
        t1 += ta
        t2 += tb
    # every item fits
    left, right = Fraction(lo), top
    if g1 > 0:
        right = min(right, (c - g2) / g1)
    elif g2 > c:
        right = left - 1
    consider(left, right, t1 - 1, t2)
    return best


@dataclass(frozen=True)
class LpProfile:
    """Maximum of the relaxation over all penalty values, plus its full shape."""

    inst: Instance
    argmax_pi: Fraction
    max_value: Fraction

    @cached_property
    def breakpoints(self) -> list[tuple[Fraction, Fraction]]:
        return lp_breakpoints(self.inst)

    @property
    def segments(self) -> int:
        return max(len(self.breakpoints) - 1, 0)


def solve_lp(inst: Instance) -> LpProfile:
    """Maximize the relaxation over pi in O(n log n).

    Binary search on the distinct penalty values using the sign of the left
    slope, then a linear sweep over candidate split items inside the bracket.
    """
    if inst.n == 0:
        return LpProfile(inst, Fraction(0), Fraction(0))
    values = sorted({0} | {it.penalty for it in inst.items})
    # largest k >= 1 with positive left slope at values[k]
    lo_k, hi_k = 0, len(values) - 1
    while lo_k < hi_k:
        mid = (lo_k + hi_k + 1) // 2
        if _left_slope(inst, values[mid]) > 0:
            lo_k = mid
        else:
            hi_k = mid - 1
    k = lo_k
    if k == len(values) - 1:
        pi = Fraction(values[k])
        return LpProfile(inst, pi, lp_value_at(inst, pi))
    pi, val = _sweep_interval(inst, values[k], values[k + 1])
    return LpProfile(inst, pi, val)


def lp_breakpoints(inst: Instance) -> list[tuple[Fraction, Fraction]]:
    """Exact vertices of the relaxation value as a function of pi.

    Covers [0, max penalty + 1]; past the largest penalty the function is a
    single ray of slope -1, represented by its point at max penalty + 1.
    """
    if inst.n == 0:
        return [(Fraction(0), Fraction(0))]
    c = inst.capacity
    values = sorted({0} | {it.penalty for it in inst.items})
    points: dict[Fraction, Fraction] = {}
    for v in values:
        points[Fraction(v)] = lp_value_at(inst, v)
    tail = Fraction(values[-1] + 1)
    points[tail] = lp_value_at(inst, tail)
    for lo, hi in zip(values, values[1:]):
        g1 = g2 = t1 = t2 = Fraction(0)
        for (a, b, ta, tb, _j) in _lines(inst, lo):
            g1 += a
            g2 += b
            t1 += ta
            t2 += tb
            if g1 > 0:
                pi = (c - g2) / g1
                if lo < pi < hi:
                    points[pi] = t1 * pi + t2 - pi
    ordered = sorted(points.items())
    out = [ordered[0]]
    for k in range(1, len(ordered) - 1):
        (x0, y0), (x1, y1), (x2, y2) = out[-1], ordered[k], ordered[k + 1]
        if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
            out.append(ordered[k])
    if len(ordered) > 1:
        out.append(ordered[-1])
    return out


def bounds_pkp_j_lp(inst: Instance) -> list[Fraction]:
    """For every j: LP bound of the knapsack over items j..n-1, minus pi_j.

    One pass over the efficiency order with a moving split pointer.
    """
    n, c = inst.n, inst.capacity
    order = list(inst.eff_order)
    pos = [0] * n
    for k, j in enumerate(order):
        pos[j] = k
    w = [it.weight for it in inst.items]
    p = [it.profit for it in inst.items]
    removed = [False] * n
    ptr = 0
    packed_w = packed_p = 0
    out = []
    for j in range(n):
        if j > 0:
            k = pos[j - 1]
            removed[k] = True
            if k < ptr:
                packed_w -= w[j - 1]
                packed_p -= p[j - 1]
        while ptr < n:
            i = order[ptr]
            if removed[ptr]:
                ptr += 1
            elif packed_w + w[i] <= c:
                packed_w += w[i]
                packed_p += p[i]
                ptr += 1
            else:
                break
        if ptr < n:
            i = order[ptr]
            lp = packed_p + Fraction(p[i] * (c - packed_w), w[i])
        else:
            lp = Fraction(packed_p)
        out.append(lp - inst.items[j].penalty)
    return out


class _SumTree:
    """Complete binary tree over leaves in efficiency order with weight/profit sums."""

    def __init__(self, weights: Sequence[int], profits: Sequence[int]):
        size = 1
        while size < max(len(weights), 1):
            size *= 2
        self.size = size
        self.w = [0] * (2 * size)
        self.p = [0] * (2 * size)
        self.w[size:size + len(weights)] = weights
        self.p[size:size + len(profits)] = profits
        for v in range(size - 1, 0, -1):
            self.w[v] = self.w[2 * v] + self.w[2 * v + 1]
            self.p[v] = self.p[2 * v] + self.p[2 * v + 1]

    def delete(self, leaf: int) -> None:
        v = leaf + self.size
        dw, dp = self.w[v], self.p[v]
        while v:
            self.w[v] -= dw
            self.p[v] -= dp
            v //= 2

    def lp(self, room: int) -> Fraction:
        w, p = self.w, self.p
        if w[1] <= room:
            return Fraction(p[1])
        v, acc = 1, 0
        while v < self.size:
            left = 2 * v
            if w[left] > room:
                v = left
            else:
                room -= w[left]
                acc += p[left]
                v = left + 1
        return acc + Fraction(p[v] * room, w[v])


def bounds_pkp_j_plus_lp(inst: Instance) -> list[Optional[Fraction]]:
    """For every j: p_j - pi_j + LP bound over items j+1..n-1 with capacity c - w_j.

    ``None`` where item j alone does not fit. Uses leaf deletions in a sum tree
    so the whole sweep costs O(n log n).
    """
    order = list(inst.eff_order)
    pos = [0] * inst.n
    for k, j in enumerate(order):
        pos[j] = k
    tree = _SumTree([inst.items[j].weight for j in order], [inst.items[j].profit for j in order])
    out: list[Optional[Fraction]] = []
    for j, it in enumerate(inst.items):
        tree.delete(pos[j])
        if it.weight > inst.capacity:
            out.append(None)
        else:
            out.append(it.profit - it.penalty + tree.lp(inst.capacity - it.weight))
    return out


@dataclass(frozen=True)
class BoundChain:
    ub_sub_plus: Fraction
    ub_sub: Fraction
    z_lp: Fraction


def bound_chain_check(inst: Instance) -> BoundChain:
    """The three global bounds; raises AssertionError if they are out of order.

    The empty solution (value 0) is included in both sub-problem maxima.
    """
    plus = [b for b in bounds_pkp_j_plus_lp(inst) if b is not None]
    ub_plus = max(plus + [Fraction(0)])
    ub_sub = max(bounds_pkp_j_lp(inst) + [Fraction(0)])
    z_lp = solve_lp(inst).max_value
    if not ub_plus <= ub_sub <= z_lp:
        raise AssertionError(f"bound chain violated: {ub_plus} <= {ub_sub} <= {z_lp}")
    return BoundChain(ub_plus, ub_sub, z_lp)
