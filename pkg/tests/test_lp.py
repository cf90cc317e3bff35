import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from pkp.approx import make_inapprox_fixture
from pkp.exact import solve
from pkp.lp import (bound_chain_check, bounds_pkp_j_lp, bounds_pkp_j_plus_lp, lp_breakpoints, lp_value_at,
                    solve_lp)
from pkp.model import canonicalize

from conftest import (dantzig, instances, lp_at, lp_max_oracle, naive_plus_bounds, naive_sub_bounds, pkp_brute,
                      random_instance)


def test_worked_instance_values(worked_inst):
    assert lp_value_at(worked_inst, 1) == 12
    prof = solve_lp(worked_inst)
    assert prof.max_value == 12 and prof.argmax_pi == 1
    assert bounds_pkp_j_lp(worked_inst) == [11, 9]
    assert bounds_pkp_j_plus_lp(worked_inst) == [10, 9]
    chain = bound_chain_check(worked_inst)
    assert (chain.ub_sub_plus, chain.ub_sub, chain.z_lp) == (10, 11, 12)
    assert chain.ub_sub_plus < chain.ub_sub < chain.z_lp


def test_value_at_zero_uses_only_free_items():
    inst = canonicalize([(10, 5, 0), (9, 3, 4), (4, 4, 0)], 7)
    assert lp_value_at(inst, 0) == 10 + Fraction(2, 4) * 4


def test_value_above_all_penalties_is_dantzig_minus_pi(three_inst):
    plain = dantzig([(it.profit, it.weight, 1) for it in three_inst.items], three_inst.capacity)
    assert lp_value_at(three_inst, 7) == plain - 7
    assert lp_value_at(three_inst, Fraction(11, 2)) == plain - Fraction(11, 2)


def test_negative_pi_rejected(worked_inst):
    with pytest.raises(ValueError):
        lp_value_at(worked_inst, -1)


def test_zero_penalties_give_dantzig():
    inst = canonicalize([(7, 3, 0), (5, 4, 0), (4, 4, 0)], 9)
    assert solve_lp(inst).max_value == dantzig([(7, 3, 1), (5, 4, 1), (4, 4, 1)], 9)


def test_empty_instance_lp():
    inst = canonicalize([], 4)
    assert solve_lp(inst).max_value == 0
    assert bound_chain_check(inst).z_lp == 0


def test_single_item_bounds():
    inst = canonicalize([(9, 3, 4)], 5)
    assert bounds_pkp_j_lp(inst) == [5]
    assert bounds_pkp_j_plus_lp(inst) == [5]


def test_nothing_fits():
    inst = canonicalize([(9, 6, 4), (3, 8, 1)], 5)
    assert bounds_pkp_j_plus_lp(inst) == [None, None]
    assert bound_chain_check(inst).ub_sub_plus == 0


def test_equal_penalties_chain():
    inst = canonicalize([(5, 3, 4), (8, 6, 4), (2, 1, 4), (7, 5, 4)], 9)
    bound_chain_check(inst)


@pytest.mark.parametrize("M", [4, 8, 100, 10**6])
def test_gap_fixture(M):
    inst = make_inapprox_fixture(M)
    assert bound_chain_check(inst).ub_sub_plus == M // 2
    assert solve(inst).value == 1


@given(instances(n_max=8), st.fractions(min_value=0, max_value=50, max_denominator=12))
def test_value_at_matches_naive(inst, pi):
    assert lp_value_at(inst, pi) == lp_at(inst, pi)


@settings(max_examples=150, deadline=None)
@given(instances(n_max=9))
def test_optimum_matches_oracle(inst):
    prof = solve_lp(inst)
    assert prof.max_value == lp_max_oracle(inst)
    assert lp_value_at(inst, prof.argmax_pi) == prof.max_value


@settings(max_examples=100, deadline=None)
@given(instances(n_max=9))
def test_profile_shape(inst):
    pts = lp_breakpoints(inst)
    assert len(pts) - 1 <= 2 * max(inst.n, 1)
    for x, y in pts:
        assert lp_at(inst, x) == y
    slopes = [(y2 - y1) / (x2 - x1) for (x1, y1), (x2, y2) in zip(pts, pts[1:])]
    assert all(a >= b for a, b in zip(slopes, slopes[1:]))
    assert max(y for _, y in pts) == solve_lp(inst).max_value
    # a point between two vertices lies on the chord
    for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
        mid = (x1 + x2) / 2
        assert lp_at(inst, mid) == (y1 + y2) / 2


def _lp_float(inst):
    """The relaxation as one LP in (x, pi), solved in floating point."""
    n = inst.n
    cost = np.array([-it.profit for it in inst.items] + [1.0])
    rows = [[it.weight for it in inst.items] + [0.0]]
    rhs = [inst.capacity]
    for j, it in enumerate(inst.items):
        row = [0.0] * (n + 1)
        row[j] = it.penalty
        row[n] = -1.0
        rows.append(row)
        rhs.append(0.0)
    res = linprog(cost, A_ub=rows, b_ub=rhs, bounds=[(0, 1)] * n + [(0, None)], method="highs")
    return -res.fun


def test_optimum_matches_float_lp():
    rng = random.Random(11)
    for _ in range(60):
        inst = random_instance(rng, n_max=30, R=200, n_min=1)
        assert float(solve_lp(inst).max_value) == pytest.approx(_lp_float(inst), rel=1e-7, abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(instances(n_max=12))
def test_bounds_match_naive(inst):
    assert bounds_pkp_j_lp(inst) == naive_sub_bounds(inst)
    plus = bounds_pkp_j_plus_lp(inst)
    assert plus == naive_plus_bounds(inst)
    for a, b in zip(plus, bounds_pkp_j_lp(inst)):
        if a is not None:
            assert a <= b


@settings(max_examples=80, deadline=None)
@given(instances(n_max=9))
def test_chain_and_optimum(inst):
    chain = bound_chain_check(inst)
    assert pkp_brute(inst) <= chain.ub_sub_plus


def test_tree_bounds_on_larger_instances():
    rng = random.Random(5)
    for _ in range(15):
        inst = random_instance(rng, n_max=200, R=1000, n_min=100)
        assert bounds_pkp_j_plus_lp(inst) == naive_plus_bounds(inst)
