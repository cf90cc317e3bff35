"""Core data types for the penalized knapsack problem and the instance text format.

Items are kept in *canonical order*: penalties non-increasing, ties broken by
descending weight and then by input position. Every solver in the package
indexes items by their canonical position.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, TextIO, Union

import numpy as np

_LIMIT = 2**62


class PkpError(Exception):
    """Base class for all errors raised by this package."""


class InvalidItem(PkpError, ValueError):
    pass


class OverflowRisk(PkpError, ValueError):
    pass


class CapacityExceeded(PkpError, ValueError):
    def __init__(self, weight: int, capacity: int):
        super().__init__(f"selected weight {weight} exceeds capacity {capacity}")
        self.weight = weight
        self.capacity = capacity


class InstanceFormatError(PkpError, ValueError):
    pass


@dataclass(frozen=True)
class Item:
    profit: int
    weight: int
    penalty: int
    original_index: int = 0

    def __post_init__(self):
        for name in ("profit", "weight", "penalty"):
            if not isinstance(getattr(self, name), (int, np.integer)):
                raise InvalidItem(f"{name} must be an integer, got {getattr(self, name)!r}")
        if self.weight < 1:
            raise InvalidItem(f"weight must be >= 1, got {self.weight}")
        if self.profit < 0 or self.penalty < 0:
            raise InvalidItem(f"profit and penalty must be non-negative: {self}")


@dataclass(frozen=True)
class Instance:
    """A PKP instance in canonical order. Build it with :func:`canonicalize`."""

    items: tuple[Item, ...]
    capacity: int
    label: str = ""

    @property
    def n(self) -> int:
        return len(self.items)

    def __len__(self) -> int:
        return len(self.items)

    @cached_property
    def profits(self) -> np.ndarray:
        return np.array([it.profit for it in self.items], dtype=np.int64)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([it.weight for it in self.items], dtype=np.int64)

    @cached_property
    def penalties(self) -> np.ndarray:
        return np.array([it.penalty for it in self.items], dtype=np.int64)

    @cached_property
    def eff_order(self) -> np.ndarray:
        """Canonical indices sorted by non-increasing p/w.

        Ties go to the larger penalty, i.e. the smaller canonical index.
        Filtering this array keeps it valid for any item subset.
        """
        order = sorted(range(self.n), key=lambda i: (Fraction(-self.items[i].profit, self.items[i].weight), i))
        return np.array(order, dtype=np.int64)

    @cached_property
    def eff_order_low_penalty(self) -> np.ndarray:
        """Like ``eff_order`` but ties go to the smaller penalty."""
        order = sorted(range(self.n), key=lambda i: (Fraction(-self.items[i].profit, self.items[i].weight), -i))
        return np.array(order, dtype=np.int64)

    @cached_property
    def overflow_safe(self) -> bool:
        """True when capacity-scale times profit-scale products fit in int64."""
        if not self.items:
            return True
        span = max(int(self.weights.sum()), self.capacity) + 1
        top = max(int(self.profits.max()), int(self.penalties.max()), 1)
        return span * top < _LIMIT


@dataclass(frozen=True)
class Solution:
    value: int
    leading_index: Optional[int]
    selected: frozenset[int]
    certified_optimal: bool = False

    def with_certified(self, flag: bool) -> "Solution":
        return Solution(self.value, self.leading_index, self.selected, flag)


EMPTY_SOLUTION = Solution(0, None, frozenset(), False)


def _as_item(raw, position: int) -> Item:
    if isinstance(raw, Item):
        return raw
    p, w, pi = raw
    return Item(int(p), int(w), int(pi), position)


def canonicalize(raw_items: Iterable[Union[Item, Sequence[int]]], capacity: int, label: str = "") -> Instance:
    """Validate items and sort them into canonical order.

    Tuples ``(p, w, pi)`` are accepted and numbered by position; ``Item``
    objects keep their ``original_index``.
    """
    items = [_as_item(raw, k) for k, raw in enumerate(raw_items)]
    if capacity < 0:
        raise InvalidItem(f"capacity must be non-negative, got {capacity}")
    if items:
        top = max(max(it.profit, it.weight, it.penalty) for it in items)
        if len(items) * top >= _LIMIT or capacity >= _LIMIT:
            raise OverflowRisk(f"n * max value = {len(items) * top} is not below 2^62")
    items.sort(key=lambda it: (-it.penalty, -it.weight, it.original_index))
    return Instance(tuple(items), int(capacity), label)


def evaluate(inst: Instance, selected: Iterable[int]) -> Solution:
    """Objective value of a canonical-index set; raises if it does not fit."""
    chosen = frozenset(int(j) for j in selected)
    for j in chosen:
        if not 0 <= j < inst.n:
            raise IndexError(f"item index {j} out of range for n={inst.n}")
    weight = sum(inst.items[j].weight for j in chosen)
    if weight > inst.capacity:
        raise CapacityExceeded(weight, inst.capacity)
    if not chosen:
        return Solution(0, None, chosen)
    lead = min(chosen)
    value = sum(inst.items[j].profit for j in chosen) - inst.items[lead].penalty
    return Solution(value, lead, chosen)


def format_instance(inst: Instance) -> str:
    lines = [f"{inst.n} {inst.capacity}"]
    for it in sorted(inst.items, key=lambda it: it.original_index):
        lines.append(f"{it.profit} {it.weight} {it.penalty}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str, label: str = "") -> Instance:
    tokens = text.split()
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise InstanceFormatError(f"non-integer token in instance: {exc}") from None
    if len(values) < 2:
        raise InstanceFormatError("missing header line 'n c'")
    n, c = values[0], values[1]
    if n < 0 or len(values) != 2 + 3 * n:
        raise InstanceFormatError(f"expected {n} item lines of 3 integers, got {len(values) - 2} numbers")
    raw = [tuple(values[2 + 3 * k: 5 + 3 * k]) for k in range(n)]
    return canonicalize(raw, c, label)


def write_instance(inst: Instance, dest: Union[str, os.PathLike, TextIO]) -> None:
    text = format_instance(inst)
    if isinstance(dest, io.TextIOBase) or hasattr(dest, "write"):
        dest.write(text)
        return
    with open(dest, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def read_instance(path: Union[str, os.PathLike]) -> Instance:
    with open(path, encoding="ascii") as fh:
        return parse_instance(fh.read(), label=os.path.splitext(os.path.basename(str(path)))[0])
