"""Exhaustive enumeration for tiny instances. Used as ground truth in tests."""

from __future__ import annotations

import numpy as np

from .model import Instance, PkpError, Solution, evaluate

MAX_N = 25
_LOW = 12


class TooLarge(PkpError):
    pass


def _block(values: np.ndarray, bits: int) -> np.ndarray:
    """Sums of ``values`` over every mask of ``bits`` low bits."""
    out = np.zeros(1 << bits, dtype=np.int64)
    for k in range(bits):
        out[1 << k: 2 << k] = out[: 1 << k] + values[k]
    return out


def brute_force(inst: Instance) -> Solution:
    """Optimal solution by enumerating all 2^n subsets.

    Ties go to the smallest leading index (the empty set counts as index n),
    then to the lexicographically smallest sorted index tuple.
    """
    n = inst.n
    if n > MAX_N:
        raise TooLarge(f"brute force limited to n <= {MAX_N}, got {n}")
    if n == 0:
        return Solution(0, None, frozenset(), True)
    low = min(n, _LOW)
    p, w, pen = inst.profits, inst.weights, inst.penalties
    lp_, lw = _block(p[:low], low), _block(w[:low], low)
    masks = np.arange(1 << low, dtype=np.int64)
    # leading item of a low mask is its lowest set bit
    lowest = np.full(1 << low, n, dtype=np.int64)
    for k in range(low - 1, -1, -1):
        lowest[(masks >> k) & 1 == 1] = k
    pen_ext = np.append(pen, 0)
    best = None
    for high in range(1 << (n - low)):
        hp = hw = 0
        hlead = n
        for k in range(n - low):
            if (high >> k) & 1:
                hp += int(p[low + k])
                hw += int(w[low + k])
                hlead = min(hlead, low + k)
        tot_w = lw + hw
        lead = np.minimum(lowest, hlead)
        vals = lp_ + hp - pen_ext[lead]
        ok = np.flatnonzero(tot_w <= inst.capacity)
        if len(ok) == 0:
            continue
        top = vals[ok].max()
        for m in ok[vals[ok] == top]:
            chosen = tuple(k for k in range(low) if (m >> k) & 1) + tuple(
                low + k for k in range(n - low) if (high >> k) & 1)
            key = (-int(top), int(lead[m]), chosen)
            if best is None or key < best:
                best = key
    sol = evaluate(inst, best[2])
    return sol.with_certified(True)
