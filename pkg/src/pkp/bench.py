"""Benchmark harness: solve every instance file in a directory and roll the
results up into per-class rows."""

from __future__ import annotations

import csv
import glob
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence

from .exact import SolverParams, run
from .generator import parse_filename
from .model import read_instance

GROUP_KEYS = ("profit_class", "weight_type", "penalty_class", "tau")
CSV_COLUMNS = GROUP_KEYS + (
    "count", "avg_time_ms", "max_time_ms", "n_opt", "step1_only_pct",
    "step1_time_pct", "step2_time_pct", "states_max_avg", "states_max_max",
)


@dataclass(frozen=True)
class InstanceResult:
    path: str
    profit_class: str
    weight_type: str
    penalty_class: str
    tau: str
    value: int
    leading_index: Optional[int]
    certified: bool
    time_ms: int
    step1_ms: int
    step2_ms: int
    step1_only: bool
    states_max: int


def solve_file(path: str, params: SolverParams) -> InstanceResult:
    inst = read_instance(path)
    t0 = time.monotonic()
    rep = run(inst, params)
    elapsed = time.monotonic() - t0
    labels = parse_filename(path)
    sol = rep.solution
    lead = None if sol.leading_index is None else inst.items[sol.leading_index].original_index
    return InstanceResult(
        path=os.path.basename(path),
        profit_class=labels.get("profit_class", "?"),
        weight_type=labels.get("weight_type", "?"),
        penalty_class=labels.get("penalty_class", "?"),
        tau=labels.get("tau", "?"),
        value=sol.value,
        leading_index=lead,
        certified=sol.certified_optimal,
        time_ms=round(elapsed * 1000),
        step1_ms=round(rep.step1_time * 1000),
        step2_ms=round(rep.step2_time * 1000),
        step1_only=rep.step1_only,
        states_max=rep.states_max,
    )


def instance_files(directory: str) -> list[str]:
    return sorted(glob.glob(os.path.join(directory, "*.txt")))


def solve_all(paths: Sequence[str], params: SolverParams, jobs: int = 1) -> list[InstanceResult]:
    """Solve every file; with jobs > 1 each worker process handles one instance at a time."""
    if jobs <= 1:
        return [solve_file(p, params) for p in paths]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(solve_file, paths, [params] * len(paths)))


def aggregate(results: Iterable[InstanceResult], group_by: Sequence[str] = GROUP_KEYS) -> list[dict]:
    for key in group_by:
        if key not in GROUP_KEYS:
            raise ValueError(f"unknown group key {key!r}")
    groups: dict[tuple, list[InstanceResult]] = {}
    for r in results:
        groups.setdefault(tuple(getattr(r, k) for k in group_by), []).append(r)
    rows = []
    for key in sorted(groups):
        rs = groups[key]
        total_ms = sum(r.time_ms for r in rs)
        row = {k: "all" for k in GROUP_KEYS}
        row.update(dict(zip(group_by, key)))
        row.update(
            count=len(rs),
            avg_time_ms=round(total_ms / len(rs)),
            max_time_ms=max(r.time_ms for r in rs),
            n_opt=sum(r.certified for r in rs),
            step1_only_pct=round(100 * sum(r.step1_only for r in rs) / len(rs), 2),
            step1_time_pct=round(100 * sum(r.step1_ms for r in rs) / total_ms, 2) if total_ms else 0.0,
            step2_time_pct=round(100 * sum(r.step2_ms for r in rs) / total_ms, 2) if total_ms else 0.0,
            states_max_avg=round(sum(r.states_max for r in rs) / len(rs)),
            states_max_max=max(r.states_max for r in rs),
        )
        rows.append(row)
    return rows


def write_rows(rows: list[dict], columns: Sequence[str], dest) -> None:
    writer = csv.DictWriter(dest, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row[k] for k in columns})


def write_instance_rows(results: Sequence[InstanceResult], dest) -> None:
    rows = [asdict(r) for r in results]
    columns = list(InstanceResult.__dataclass_fields__)
    write_rows(rows, columns, dest)
