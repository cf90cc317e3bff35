import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from pkp.model import canonicalize

WORKED_RAW = [(10, 5, 1), (6, 4, 2)]
WORKED_C = 7
THREE_RAW = [(6, 4, 3), (5, 4, 5), (7, 6, 2)]
THREE_C = 10


@pytest.fixture
def worked_inst():
    return canonicalize(WORKED_RAW, WORKED_C)


@pytest.fixture
def three_inst():
    return canonicalize(THREE_RAW, THREE_C)


def random_raw(rng: random.Random, n: int, R: int, zero_pen: float = 0.1):
    raw = []
    for _ in range(n):
        w = rng.randint(1, R)
        style = rng.randint(0, 3)
        p = [rng.randint(0, R), w + R // 10, w, rng.randint(max(1, w - R // 10), w + R // 10)][style]
        pi = 0 if rng.random() < zero_pen else [rng.randint(0, R), R - w + 1, w, rng.randint(1, 3)][rng.randint(0, 3)]
        raw.append((p, w, pi))
    return raw


def random_instance(rng: random.Random, n_max: int = 12, R: int = 50, n_min: int = 0):
    n = rng.randint(n_min, n_max)
    raw = random_raw(rng, n, R)
    total = sum(w for _, w, _ in raw)
    c = rng.randint(0, total + 2)
    return canonicalize(raw, c)


@st.composite
def instances(draw, n_max=10, value_max=40):
    n = draw(st.integers(0, n_max))
    raw = [
        (draw(st.integers(0, value_max)), draw(st.integers(1, value_max)), draw(st.integers(0, value_max)))
        for _ in range(n)
    ]
    total = sum(w for _, w, _ in raw)
    c = draw(st.integers(0, total + 3))
    return canonicalize(raw, c)


# ----- independent oracles (deliberately naive) -----

def subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(n), r)


def pkp_value(inst, subset):
    if sum(inst.items[j].weight for j in subset) > inst.capacity:
        return None
    if not subset:
        return 0
    return sum(inst.items[j].profit for j in subset) - max(inst.items[j].penalty for j in subset)


def pkp_brute(inst, lead=None):
    """Best PKP value, optionally restricted to solutions led by item ``lead``."""
    best = 0 if lead is None else None
    for s in subsets(inst.n):
        if lead is not None and (not s or min(s) != lead):
            continue
        v = pkp_value(inst, s)
        if v is not None and (best is None or v > best):
            best = v
    return best


def kp_brute(inst, items, capacity):
    items = list(items)
    best = 0
    for r in range(len(items) + 1):
        for s in itertools.combinations(items, r):
            if sum(inst.items[j].weight for j in s) <= capacity:
                best = max(best, sum(inst.items[j].profit for j in s))
    return best


def dantzig(pairs, capacity):
    """LP knapsack value for (profit, weight, cap) triples, exact."""
    pairs = sorted(pairs, key=lambda t: Fraction(t[0], t[1]), reverse=True)
    room = Fraction(capacity)
    value = Fraction(0)
    for p, w, cap in pairs:
        if room <= 0:
            break
        take = min(Fraction(cap), room / w)
        value += take * p
        room -= take * w
    return value


def lp_at(inst, pi):
    pi = Fraction(pi)
    triples = []
    for it in inst.items:
        cap = Fraction(1) if it.penalty == 0 or pi >= it.penalty else pi / it.penalty
        triples.append((it.profit, it.weight, cap))
    return dantzig(triples, inst.capacity) - pi


def lp_fill_points(inst, lo, hi):
    """Penalty values in (lo, hi) where a prefix of the efficiency order exactly fills the knapsack."""
    order = sorted(inst.items, key=lambda it: Fraction(it.profit, it.weight), reverse=True)
    fixed = Fraction(0)
    var = Fraction(0)
    out = []
    for it in order:
        if it.penalty == 0 or it.penalty <= lo:
            fixed += it.weight
        else:
            var += Fraction(it.weight, it.penalty)
        if var > 0:
            pi = (inst.capacity - fixed) / var
            if lo < pi < hi:
                out.append(pi)
    return out


def lp_max_oracle(inst, grid=16):
    """Maximum of the relaxation over pi: evaluate at every penalty value, then
    at every fill point and a rational grid inside the two intervals around the best one."""
    vals = sorted({0} | {it.penalty for it in inst.items})
    vals.append(vals[-1] + 1)
    at = [lp_at(inst, v) for v in vals]
    k = max(range(len(vals)), key=lambda i: (at[i], -i))
    best = at[k]
    for lo, hi in ((vals[max(k - 1, 0)], vals[k]), (vals[k], vals[min(k + 1, len(vals) - 1)])):
        if lo >= hi:
            continue
        pts = lp_fill_points(inst, lo, hi) + [lo + Fraction(i * (hi - lo), grid) for i in range(1, grid)]
        for pi in pts:
            best = max(best, lp_at(inst, pi))
    return best


def naive_plus_bounds(inst):
    out = []
    for j, it in enumerate(inst.items):
        if it.weight > inst.capacity:
            out.append(None)
            continue
        rest = [(o.profit, o.weight, 1) for o in inst.items[j + 1:]]
        out.append(it.profit - it.penalty + dantzig(rest, inst.capacity - it.weight))
    return out


def naive_sub_bounds(inst):
    return [dantzig([(o.profit, o.weight, 1) for o in inst.items[j:]], inst.capacity) - it.penalty
            for j, it in enumerate(inst.items)]


def qualifying_instance(rng: random.Random, kind: str, n_max: int = 14, R: int = 60, C: int = 5,
                        rho: Fraction = Fraction(3, 4)):
    """Random instance meeting the condition of one special class (kind = CaseKind value)."""
    n = rng.randint(1, n_max)
    raw = []
    for _ in range(n):
        w = rng.randint(1, R)
        pi = rng.randint(0, R)
        if kind == "profit-dominates":
            p = pi + rng.randint(0, R)
        elif kind == "penalty-bounded":
            pi = rng.randint(0, C - 1)
            p = rng.randint(0, R)
        elif kind == "gap-bounded":
            p = rng.randint(max(0, pi - C), pi + R)
        else:
            p = rng.randint(0, R)
        raw.append((p, w, pi))
    if kind == "profit-floor":
        pi_max = max(pi for _, _, pi in raw)
        floor = -(-rho.numerator * pi_max // rho.denominator)
        raw = [(max(p, floor), w, pi) for p, w, pi in raw]
    c = rng.randint(0, sum(w for _, w, _ in raw) + 2)
    return canonicalize(raw, c)
