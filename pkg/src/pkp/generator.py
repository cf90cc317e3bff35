"""Benchmark instance generator.

Weights, penalties and profits follow the classical correlation classes of the
knapsack literature. Randomness comes from numpy's PCG64 bit generator, which
is platform independent for a given seed, so files are reproducible across
machines. Draw order is fixed: weights, then penalties, then profits.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

from .model import Instance, canonicalize, write_instance

WEIGHT_TYPES = ("a1", "a2")
PENALTY_CLASSES = tuple(f"pi{k}" for k in range(1, 9))
PROFIT_CLASSES = tuple(f"p{k}" for k in range(1, 8))
SUITE_TAUS = ("0.5", "0.1", "0.01")

CLASS_NAMES = {
    1: "uncorrelated",
    2: "weakly correlated",
    3: "strongly correlated",
    4: "inverse strongly correlated",
    5: "almost strongly correlated",
    6: "subset-sum",
}


@dataclass(frozen=True)
class GenSpec:
    n: int
    R: int
    weight_type: str
    penalty_class: str
    profit_class: str
    tau: Union[Fraction, str, float] = Fraction(1, 2)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "tau", Fraction(str(self.tau)) if not isinstance(self.tau, Fraction) else self.tau)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.R < 10:
            raise ValueError("R must be >= 10")
        if not 0 < self.tau <= 1:
            raise ValueError("tau must lie in (0, 1]")
        if self.weight_type not in WEIGHT_TYPES:
            raise ValueError(f"unknown weight type {self.weight_type!r}")
        if self.penalty_class not in PENALTY_CLASSES:
            raise ValueError(f"unknown penalty class {self.penalty_class!r}")
        if self.profit_class not in PROFIT_CLASSES:
            raise ValueError(f"unknown profit class {self.profit_class!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    @property
    def tau_text(self) -> str:
        f = float(self.tau)
        return repr(f) if Fraction(repr(f)) == self.tau else f"{self.tau.numerator}over{self.tau.denominator}"

    def filename(self, index: int = 0) -> str:
        return (f"{self.weight_type}_{self.penalty_class}_{self.profit_class}_tau{self.tau_text}"
                f"_n{self.n}_R{self.R}_s{self.seed}_i{index}.txt")


_NAME = re.compile(r"(a[12])_(pi[1-8])_(p[1-7])_tau([^_]+)_n(\d+)_R(\d+)_s(\d+)")


def parse_filename(name: str) -> dict:
    """Class labels encoded in a generated file name (empty dict if not ours)."""
    m = _NAME.search(os.path.basename(name))
    if not m:
        return {}
    wt, pc, qc, tau, n, R, seed = m.groups()
    return {"weight_type": wt, "penalty_class": pc, "profit_class": qc, "tau": tau,
            "n": int(n), "R": int(R), "seed": int(seed)}


def _correlated(kind: int, w: np.ndarray, R: int, rng: np.random.Generator) -> np.ndarray:
    d10, d500 = R // 10, R // 500
    if kind == 1:
        return rng.integers(1, R, size=len(w), endpoint=True)
    if kind == 2:
        return rng.integers(np.maximum(1, w - d10), w + d10, endpoint=True)
    if kind == 3:
        return w + d10
    if kind == 4:
        return np.maximum(1, w - d10)
    if kind == 5:
        return rng.integers(w + d10 - d500, w + d10 + d500, endpoint=True)
    if kind == 6:
        return w.copy()
    raise ValueError(kind)


def generate(spec: GenSpec) -> Instance:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n, R = spec.n, spec.R
    if spec.weight_type == "a1":
        w = rng.integers(1, R, size=n, endpoint=True)
    else:
        w = R // 2 + rng.integers(0, R // 2, size=n, endpoint=True)
    kind = int(spec.penalty_class[2:])
    if kind == 7:
        pen = R - w + 1
    elif kind == 8:
        pen = R // w
    else:
        pen = _correlated(kind, w, R, rng)
    kind = int(spec.profit_class[1:])
    prof = pen * w if kind == 7 else _correlated(kind, w, R, rng)
    c = max(1, int(spec.tau * int(w.sum())))
    raw = list(zip(prof.tolist(), w.tolist(), pen.tolist()))
    return canonicalize(raw, c, label=spec.filename()[:-4])


def derive_seed(base: int, *parts) -> int:
    """64-bit seed for one member of a suite, derived from the base seed."""
    key = [base] + [int(p) for p in parts]
    return int(np.random.SeedSequence(key).generate_state(1, dtype=np.uint64)[0])


def suite_specs(n: int, R: int, count: int, base_seed: int = 0,
                taus=SUITE_TAUS) -> Iterator[tuple[GenSpec, int]]:
    """Full factorial: weight type x penalty class x profit class x tau x count."""
    combos = itertools.product(enumerate(WEIGHT_TYPES), enumerate(PENALTY_CLASSES),
                               enumerate(PROFIT_CLASSES), enumerate(taus))
    for (a, wt), (b, pc), (e, qc), (t, tau) in combos:
        for i in range(count):
            seed = derive_seed(base_seed, a, b, e, t, i)
            yield GenSpec(n, R, wt, pc, qc, tau, seed), i


SUITES = {"paper1000": (1000, 1000), "paper10000": (10000, 10000)}


def write_suite(name: str, count: int, out_dir, base_seed: int = 0) -> list[str]:
    n, R = SUITES[name]
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for spec, i in suite_specs(n, R, count, base_seed):
        path = os.path.join(out_dir, spec.filename(i))
        write_instance(generate(spec), path)
        paths.append(path)
    return paths
