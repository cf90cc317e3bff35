"""Compiled inner loops of the two core searches.

Each function replaces a chain of numpy passes over the state arrays with a
single loop and keeps the exact semantics (tie orders included) of the
vectorized form it replaces.
"""

import numpy as np
from numba import njit

_MIN = np.iinfo(np.int64).min


@njit(cache=True)
def merge_order(mu, nu, rho, half):
    """Merge order of two runs ``[0, half)`` and ``[half, n)`` by weight, then
    profit and rho descending; the first run wins ties. ``ok`` is False when
    the result is not sorted by that key (a run was not sorted itself)."""
    n = len(mu)
    out = np.empty(n, dtype=np.int64)
    i, j, k = 0, half, 0
    while i < half and j < n:
        if mu[j] < mu[i] or (mu[j] == mu[i] and (nu[j] > nu[i] or (nu[j] == nu[i] and rho[j] > rho[i]))):
            out[k] = j
            j += 1
        else:
            out[k] = i
            i += 1
        k += 1
    while i < half:
        out[k] = i
        i += 1
        k += 1
    while j < n:
        out[k] = j
        j += 1
        k += 1
    ok = True
    for t in range(1, n):
        x, y = out[t - 1], out[t]
        if mu[y] < mu[x] or (mu[y] == mu[x] and (nu[y] > nu[x] or (nu[y] == nu[x] and rho[y] > rho[x]))):
            ok = False
            break
    return out, ok


@njit(cache=True)
def kp_merge(nu, mu, lead, vect, p, w, tag, remove):
    """Merge the states with their copies that toggle one item, then keep the
    weight/profit Pareto front. Equal twins keep the larger leading index.

    Both runs are sorted by weight, so this is one streaming merge; each
    element is held back until the next one shows whether it survives.
    """
    n = len(nu)
    o_nu = np.empty(2 * n, dtype=np.int64)
    o_mu = np.empty(2 * n, dtype=np.int64)
    o_ld = np.empty(2 * n, dtype=np.int64)
    o_vc = np.empty(2 * n, dtype=np.uint64)
    one = np.uint64(1)
    sign = -1 if remove else 1
    cnt = 0
    best = _MIN
    i, j = 0, 0
    have = False
    h_nu, h_mu, h_ld, h_vc, h_keep = 0, 0, 0, one, False
    while i < n or j < n:
        # the first run wins weight ties, as in a stable merge
        if j >= n or (i < n and mu[i] <= mu[j] + sign * w):
            e_nu, e_mu = nu[i], mu[i]
            e_ld = min(lead[i], tag) if remove else lead[i]
            e_vc = vect[i] << one
            i += 1
        else:
            e_nu, e_mu = nu[j] + sign * p, mu[j] + sign * w
            e_ld = lead[j] if remove else min(lead[j], tag)
            e_vc = (vect[j] << one) | one
            j += 1
        if have:
            if e_mu == h_mu:
                if e_nu > h_nu:
                    h_keep = False
                elif e_nu == h_nu:
                    h_ld = max(h_ld, e_ld)
            if h_keep:
                o_nu[cnt], o_mu[cnt], o_ld[cnt], o_vc[cnt] = h_nu, h_mu, h_ld, h_vc
                cnt += 1
        e_keep = not have or e_nu > best
        if e_nu > best:
            best = e_nu
        h_nu, h_mu, h_ld, h_vc, h_keep = e_nu, e_mu, e_ld, e_vc, e_keep
        have = True
    if have and h_keep:
        o_nu[cnt], o_mu[cnt], o_ld[cnt], o_vc[cnt] = h_nu, h_mu, h_ld, h_vc
        cnt += 1
    return o_nu[:cnt], o_mu[:cnt], o_ld[:cnt], o_vc[:cnt]


@njit(cache=True)
def _ub(value, room, p, w):
    return value + room * p // w


@njit(cache=True)
def kp_prune(nu, mu, lead, vect, c, z, pb, wb, has_a, pa, wa):
    """Drop states whose integer bound does not exceed ``z``. Fitting states
    are priced at ``pb/wb``, overweight ones at ``pa/wa`` (dropped without a
    left neighbour). Compacts the arrays in place and returns the prefixes."""
    cnt = 0
    for i in range(len(nu)):
        if mu[i] <= c:
            k = _ub(nu[i], c - mu[i], pb, wb) > z
        else:
            k = has_a and _ub(nu[i], c - mu[i], pa, wa) > z
        if k:
            nu[cnt], mu[cnt], lead[cnt], vect[cnt] = nu[i], mu[i], lead[i], vect[i]
            cnt += 1
    return nu[:cnt], mu[:cnt], lead[:cnt], vect[:cnt]


@njit(cache=True)
def kp_any_survives(nu, mu, dp, dw, c, z, pb, wb, has_a, pa, wa):
    """Whether some state shifted by (dp, dw) keeps a bound above ``z``."""
    for i in range(len(nu)):
        v = nu[i] + dp
        m = mu[i] + dw
        if m <= c:
            if _ub(v, c - m, pb, wb) > z:
                return True
        elif has_a and _ub(v, c - m, pa, wa) > z:
            return True
    return False


@njit(cache=True)
def kp_best(nu, mu, lead, c, left, pen):
    """Over fitting states: the top profit (ties to the larger leading index)
    with its position, and the best profit minus leading penalty."""
    top, top_lead, top_pos = _MIN, -1, -1
    inc_v, inc_l = _MIN, -1
    for i in range(len(nu)):
        if mu[i] > c:
            continue
        ld = min(lead[i], left)
        v = nu[i]
        if v > top or (v == top and ld > top_lead):
            top, top_lead, top_pos = v, ld, i
        val = v - pen[ld]
        if val > inc_v:
            inc_v, inc_l = val, ld
    return top, top_lead, top_pos, inc_v, inc_l


@njit(cache=True)
def best_penalized(nu, mu, lead, c, left, pen):
    """First maximizer of profit minus total leading penalty over fitting states."""
    best, best_lead = _MIN, -1
    for i in range(len(nu)):
        if mu[i] <= c:
            ld = min(lead[i], left)
            val = nu[i] - pen[ld]
            if val > best:
                best, best_lead = val, ld
    return best, best_lead


@njit(cache=True)
def cw_keep(nu, mu, lead, pen, pi_min, c, z, pb, wb, has_a, pa, wa):
    """Mask of core-window states whose rho-based bound exceeds ``z``."""
    n = len(nu)
    keep = np.empty(n, dtype=np.bool_)
    for i in range(n):
        rho = nu[i] - max(pen[lead[i]], pi_min)
        if mu[i] <= c:
            keep[i] = _ub(rho, c - mu[i], pb, wb) > z
        else:
            keep[i] = has_a and _ub(rho, c - mu[i], pa, wa) > z
    return keep


@njit(cache=True)
def cw_any_survives(nu, mu, lead, dp, dw, tag, pen, pi_min, c, z, pb, wb, has_a, pa, wa):
    """Whether a state shifted by (dp, dw), with leading index capped by
    ``tag``, keeps a rho-based bound above ``z``."""
    for i in range(len(nu)):
        v = nu[i] + dp
        m = mu[i] + dw
        rho = v - max(pen[min(lead[i], tag)], pi_min)
        if m <= c:
            if _ub(rho, c - m, pb, wb) > z:
                return True
        elif has_a and _ub(rho, c - m, pa, wa) > z:
            return True
    return False


@njit(cache=True)
def dominated_mask(nu, rho, alpha):
    """States matched in both profit and rho by one of the ``alpha`` states
    before them (by any earlier state when ``alpha`` is 0)."""
    n = len(nu)
    dom = np.zeros(n, dtype=np.bool_)
    if alpha > 0:
        for j in range(n):
            lo = max(0, j - alpha)
            for i in range(j - 1, lo - 1, -1):
                if nu[i] >= nu[j] and rho[i] >= rho[j]:
                    dom[j] = True
                    break
        return dom
    if n == 0:
        return dom
    # Fenwick tree over profit ranks (largest profit first) holding max rho
    by_nu = np.argsort(-nu, kind="mergesort")
    rank = np.empty(n, dtype=np.int64)
    r = 0
    for t in range(n):
        if t == 0 or nu[by_nu[t]] != nu[by_nu[t - 1]]:
            r += 1
        rank[by_nu[t]] = r
    tree = np.full(r + 1, _MIN, dtype=np.int64)
    for j in range(n):
        k = rank[j]
        best = _MIN
        while k > 0:
            if tree[k] > best:
                best = tree[k]
            k -= k & -k
        if best != _MIN and best >= rho[j]:
            dom[j] = True
        k = rank[j]
        while k <= r:
            if tree[k] < rho[j]:
                tree[k] = rho[j]
            k += k & -k
    return dom


@njit(cache=True)
def cw_dominance(nu, mu, lead, rho, order, alpha):
    """Gather the states in ``order`` and drop the dominated ones."""
    g_nu = nu[order]
    g_rho = rho[order]
    keep = order[~dominated_mask(g_nu, g_rho, alpha)]
    return nu[keep], mu[keep], lead[keep], rho[keep]


@njit(cache=True)
def cw_merge(nu, mu, lead, p, w, tag, remove, pen, pi_min, alpha):
    """Streaming form of the core-window merge with an ``alpha`` look-back.

    Produces the states of X and X + d in (weight, -profit, -rho) order and
    drops every state matched in profit and rho by one of the ``alpha``
    states before it. ``ok`` is False when the halves were not in that order
    themselves; the caller then falls back to a full sort.
    """
    n = len(nu)
    o_nu = np.empty(2 * n, dtype=np.int64)
    o_mu = np.empty(2 * n, dtype=np.int64)
    o_ld = np.empty(2 * n, dtype=np.int64)
    o_rho = np.empty(2 * n, dtype=np.int64)
    # every merged state, dominated or not, stays visible to the look-back
    h_nu = np.empty(2 * n, dtype=np.int64)
    h_rho = np.empty(2 * n, dtype=np.int64)
    sign = -1 if remove else 1
    cnt = 0
    seen = 0
    i, j = 0, 0
    l_mu, l_nu, l_rho = _MIN, _MIN, _MIN
    a_nu, a_mu, a_ld, a_rho = 0, 0, 0, 0
    b_nu, b_mu, b_ld, b_rho = 0, 0, 0, 0
    while i < n or j < n:
        if i < n:
            a_ld = min(lead[i], tag) if remove else lead[i]
            a_nu, a_mu = nu[i], mu[i]
            a_rho = a_nu - max(pen[a_ld], pi_min)
        if j < n:
            b_ld = lead[j] if remove else min(lead[j], tag)
            b_nu, b_mu = nu[j] + sign * p, mu[j] + sign * w
            b_rho = b_nu - max(pen[b_ld], pi_min)
        take_b = i >= n or (j < n and (b_mu < a_mu or (b_mu == a_mu and (
            b_nu > a_nu or (b_nu == a_nu and b_rho > a_rho)))))
        if take_b:
            e_nu, e_mu, e_ld, e_rho = b_nu, b_mu, b_ld, b_rho
            j += 1
        else:
            e_nu, e_mu, e_ld, e_rho = a_nu, a_mu, a_ld, a_rho
            i += 1
        if seen and (e_mu < l_mu or (e_mu == l_mu and (e_nu > l_nu or (e_nu == l_nu and e_rho > l_rho)))):
            return False, o_nu[:0], o_mu[:0], o_ld[:0], o_rho[:0]
        l_mu, l_nu, l_rho = e_mu, e_nu, e_rho
        dom = False
        for k in range(seen - 1, max(seen - alpha, 0) - 1, -1):
            if h_nu[k] >= e_nu and h_rho[k] >= e_rho:
                dom = True
                break
        h_nu[seen] = e_nu
        h_rho[seen] = e_rho
        seen += 1
        if not dom:
            o_nu[cnt], o_mu[cnt], o_ld[cnt], o_rho[cnt] = e_nu, e_mu, e_ld, e_rho
            cnt += 1
    return True, o_nu[:cnt], o_mu[:cnt], o_ld[:cnt], o_rho[:cnt]


@njit(cache=True)
def shifted_best(nu, mu, lead, p, w, tag, remove, c, left, pen):
    """``best_penalized`` over X followed by X + d without building them."""
    n = len(nu)
    sign = -1 if remove else 1
    best, best_lead = _MIN, -1
    for half in range(2):
        for i in range(n):
            shift = half == 1
            m = mu[i] + sign * w if shift else mu[i]
            if m > c:
                continue
            v = nu[i] + sign * p if shift else nu[i]
            ld = lead[i]
            if shift != remove:
                ld = min(ld, tag)
            ld = min(ld, left)
            val = v - pen[ld]
            if val > best:
                best, best_lead = val, ld
    return best, best_lead


@njit(cache=True)
def fill_levels(pens, profs):
    """Penalty levels of the unpacked items right of the core.

    Returns the sorted penalties, the profit of all items up to each
    penalty (ties included) and a sparse max table of that profit minus the
    penalty.
    """
    order = np.argsort(pens, kind="mergesort")
    L = len(order)
    lv_pen = pens[order]
    full = np.empty(L, dtype=np.int64)
    s = 0
    for k in range(L):
        s += profs[order[k]]
        full[k] = s
    for k in range(L - 2, -1, -1):
        if lv_pen[k] == lv_pen[k + 1]:
            full[k] = full[k + 1]
    depth = 1
    while (1 << depth) <= L:
        depth += 1
    table = np.empty((depth, max(L, 1)), dtype=np.int64)
    for k in range(L):
        table[0, k] = full[k] - lv_pen[k]
    for d in range(1, depth):
        half = 1 << (d - 1)
        for k in range(L - (1 << d) + 1):
            table[d, k] = max(table[d - 1, k], table[d - 1, k + half])
    return lv_pen, full, table


@njit(cache=True)
def lead_levels(pen, pi_min, lv_pen, full):
    """Per leading index: how many levels lie at or below its penalty floor
    and the profit they hold."""
    k0 = np.searchsorted(lv_pen, np.maximum(pen, pi_min), side="right")
    p0 = np.zeros(len(pen), dtype=np.int64)
    for i in range(len(pen)):
        if k0[i] > 0:
            p0[i] = full[k0[i] - 1]
    return k0, p0


@njit(cache=True)
def _fill_gain(fill, pi0, k0, p0, lv_pen, full, table):
    """Largest min(fill, profit of items with penalty <= pi) - pi over pi >= pi0."""
    L = len(lv_pen)
    best = min(fill, p0) - pi0
    ks = np.searchsorted(full, fill, side="left")
    if ks > k0:
        lo, hi = k0, ks - 1
        d = 0
        while (2 << d) <= hi - lo + 1:
            d += 1
        best = max(best, table[d, lo], table[d, hi - (1 << d) + 1])
    t = max(k0, ks)
    if t < L:
        best = max(best, fill - lv_pen[t])
    return best


@njit(cache=True)
def cw_prune(nu, mu, lead, pen, pi_min, c, z, pb, wb, has_a, pa, wa, lv_pen, full, table, lv_k0, lv_p0):
    """In-place form of ``cw_keep`` followed by compaction.

    Underweight states that pass also get the penalty-aware fill bound:
    capacity left over can only be filled with unpacked items whose penalty
    does not exceed the final one.
    """
    cnt = 0
    for i in range(len(nu)):
        pi0 = max(pen[lead[i]], pi_min)
        if mu[i] <= c:
            fill = (c - mu[i]) * pb // wb
            k = nu[i] - pi0 + fill > z
            if k and lv_p0[lead[i]] < fill:
                k = nu[i] + _fill_gain(fill, pi0, lv_k0[lead[i]], lv_p0[lead[i]], lv_pen, full, table) > z
        else:
            k = has_a and _ub(nu[i] - pi0, c - mu[i], pa, wa) > z
        if k:
            nu[cnt], mu[cnt], lead[cnt] = nu[i], mu[i], lead[i]
            cnt += 1
    return nu[:cnt], mu[:cnt], lead[:cnt]


@njit(cache=True)
def penalty_bound_drop(nu, mu, lead, rho, look, penalty_values, outside, pen_pos, P, W, fixed_p, fixed_w,
                       c, z, pen, pi_min):
    n = len(nu)
    drop = np.zeros(n, dtype=np.bool_)
    best = np.full(n, _MIN, dtype=np.int64)
    for j in range(1, n):
        for k in range(1, min(look, j) + 1):
            i = j - k
            if nu[i] >= nu[j] and rho[i] < rho[j] and rho[i] > best[j]:
                best[j] = rho[i]
    cnt = 0
    for j in range(n):
        if best[j] > _MIN:
            cnt += 1
    if cnt == 0:
        return drop
    cand = np.empty(cnt, dtype=np.int64)
    level = np.empty(cnt, dtype=np.int64)
    q = 0
    for j in range(n):
        if best[j] > _MIN:
            cand[q] = j
            level[q] = np.searchsorted(penalty_values, nu[j] - best[j]) - 1
            q += 1
    by_level = np.argsort(level, kind="mergesort")
    m = len(P)
    cw = np.empty(m, dtype=np.int64)
    cp = np.empty(m, dtype=np.int64)
    uw = np.empty(m, dtype=np.int64)
    up = np.empty(m, dtype=np.int64)
    built = -2
    k = 0
    for q in range(cnt):
        j = cand[by_level[q]]
        pos = level[by_level[q]]
        if pos < 0:
            drop[j] = True
            continue
        room = c - (mu[j] - fixed_w)
        if room < 0:
            drop[j] = True
            continue
        if pos != built:
            pi_hat = penalty_values[pos]
            k = 0
            sw = 0
            sp = 0
            for t in range(m):
                if outside[t] and pen_pos[t] <= pi_hat:
                    sw += W[t]
                    sp += P[t]
                    cw[k] = sw
                    cp[k] = sp
                    uw[k] = W[t]
                    up[k] = P[t]
                    k += 1
            built = pos
        t = np.searchsorted(cw[:k], room, side="right")
        lp = cp[t - 1] if t > 0 else 0
        if t < k:
            lp += (room - (cw[t - 1] if t > 0 else 0)) * up[t] // uw[t]
        ub = nu[j] - fixed_p + lp - max(pen[lead[j]], pi_min)
        if ub <= z:
            drop[j] = True
    return drop
