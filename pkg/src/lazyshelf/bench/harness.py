"""Seeded experiment suites: instance generation, classification, paired runs and CSV metrics."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
from enum import Enum
import logging
from pathlib import Path
from statistics import fmean
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..config import PlannerConfig
from ..core.models import Instance, WorldSpec
from ..core.world import sample_instance
from ..engine import SolveReport, solve_instance
from ..errors import IOFailure, ParseError, SamplingExhausted
from ..monotone import SOLVERS
from ..perts import POLICIES
from ..resource_plan import SolveLimits
from ..storage.instances import load_world, read_json, world_from_dict

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "instance_id",
    "solver",
    "policy",
    "n",
    "solved",
    "total_ms",
    "verify_ms",
    "other_ms",
    "planner_calls",
    "buffers",
    "seed",
)
FILTERS = ("any", "monotone_only", "nonmonotone_only")
SEED_STRIDE = 1000


class InstanceClass(str, Enum):
    MONOTONE = "monotone"
    NONMONOTONE = "nonmonotone"
    UNSOLVED = "unsolved"


@dataclass(frozen=True)
class RunRecord:
    instance_id: str
    solver: str
    policy: str
    n: int
    solved: bool
    total_ms: float
    verify_ms: float
    other_ms: float
    planner_calls: int
    buffers: int
    seed: int

    def __post_init__(self) -> None:
        if self.total_ms < self.verify_ms:
            raise ValueError("total time cannot be below verification time")

    @classmethod
    def from_report(cls, instance: Instance, report: SolveReport, seed: int) -> "RunRecord":
        verify_ms = round(float(report.counters.get("verify_time", 0.0)) * 1000.0, 3)
        other_ms = round(float(report.counters.get("other_time", 0.0)) * 1000.0, 3)
        total_ms = round(verify_ms + other_ms, 3)
        return cls(
            instance_id=instance.instance_id,
            solver=report.solver,
            policy=report.policy or "",
            n=instance.size,
            solved=report.solved,
            total_ms=total_ms,
            verify_ms=verify_ms,
            other_ms=round(total_ms - verify_ms, 3),
            planner_calls=int(report.counters.get("planner_calls", 0)),
            buffers=report.buffers_used,
            seed=seed,
        )

    def sort_key(self) -> Tuple[int, str, str, str, int]:
        return (self.n, self.instance_id, self.solver, self.policy, self.seed)

    def row(self) -> Dict[str, Any]:
        return {
            "instance_id": self.instance_id,
            "solver": self.solver,
            "policy": self.policy,
            "n": self.n,
            "solved": "true" if self.solved else "false",
            "total_ms": repr(self.total_ms),
            "verify_ms": repr(self.verify_ms),
            "other_ms": repr(self.other_ms),
            "planner_calls": self.planner_calls,
            "buffers": self.buffers,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SuiteSpec:
    world: WorldSpec
    object_counts: Tuple[int, ...]
    instances_per_count: int = 30
    seed_base: int = 0
    budget: float = 10.0
    solvers: Tuple[str, ...] = ("lrs",)
    policies: Tuple[str, ...] = ()
    filter: str = "any"
    workers: int = 1
    max_perturbations: Optional[int] = None
    max_draws: int = SEED_STRIDE
    config: PlannerConfig = field(default_factory=PlannerConfig)

    def __post_init__(self) -> None:
        if self.instances_per_count < 1:
            raise ValueError("instances_per_count must be at least 1")
        if not self.instances_per_count <= self.max_draws <= SEED_STRIDE:
            raise ValueError(f"max_draws must lie between instances_per_count and {SEED_STRIDE}")
        if not self.object_counts or any(n < 1 for n in self.object_counts):
            raise ValueError("object_counts must list positive sizes")
        if self.filter not in FILTERS:
            raise ValueError(f"filter must be one of {FILTERS}, got {self.filter!r}")
        for solver in self.solvers:
            if solver not in SOLVERS:
                raise ValueError(f"unknown solver {solver!r}")
        for policy in self.policies:
            if policy not in POLICIES:
                raise ValueError(f"unknown policy {policy!r}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @property
    def limits(self) -> SolveLimits:
        return SolveLimits(max_seconds=self.budget, max_perturbations=self.max_perturbations)

    def seed_for(self, n: int, index: int) -> int:
        return self.seed_base + n * SEED_STRIDE + index


def suite_from_dict(raw: Mapping[str, Any], base_dir: Path | None = None) -> SuiteSpec:
    """Build a suite from its JSON object; ``world`` is inline or a path relative to ``base_dir``."""

    if "world" not in raw:
        raise ParseError("missing required key 'world'", field="world")
    if "object_counts" not in raw:
        raise ParseError("missing required key 'object_counts'", field="object_counts")
    world_raw = raw["world"]
    if isinstance(world_raw, str):
        world_path = Path(world_raw)
        if base_dir is not None and not world_path.is_absolute():
            world_path = base_dir / world_path
        world = load_world(world_path)
    else:
        world = world_from_dict(world_raw)
    try:
        return SuiteSpec(
            world=world,
            object_counts=tuple(int(n) for n in raw["object_counts"]),
            instances_per_count=int(raw.get("instances_per_count", 30)),
            seed_base=int(raw.get("seed_base", 0)),
            budget=float(raw.get("budget", 10.0)),
            solvers=tuple(raw.get("solvers", ("lrs",))),
            policies=tuple(raw.get("policies", ())),
            filter=str(raw.get("filter", "any")),
            workers=int(raw.get("workers", 1)),
            max_perturbations=raw.get("max_perturbations"),
            max_draws=int(raw.get("max_draws", SEED_STRIDE)),
            config=PlannerConfig.from_dict(raw.get("config", {})),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), field="suite") from exc


def load_suite(path: str | Path) -> SuiteSpec:
    path = Path(path)
    raw = read_json(path)
    if not isinstance(raw, dict):
        raise ParseError("suite payload must be a JSON object", field="<root>")
    return suite_from_dict(raw, base_dir=path.parent)


def classify_instance(
    instance: Instance,
    *,
    config: Optional[PlannerConfig] = None,
    limits: Optional[SolveLimits] = None,
    seed: int = 0,
) -> InstanceClass:
    """Monotone when the lazy solver succeeds directly, non-monotone when hybrid search does."""

    if solve_instance(instance, solver="lrs", config=config, limits=limits).solved:
        return InstanceClass.MONOTONE
    report = solve_instance(instance, solver="lrs", policy="hybrid", config=config, limits=limits, seed=seed)
    return InstanceClass.NONMONOTONE if report.solved else InstanceClass.UNSOLVED


def _wanted(spec: SuiteSpec, instance: Instance, seed: int) -> bool:
    if spec.filter == "any":
        return True
    label = classify_instance(instance, config=spec.config, limits=spec.limits, seed=seed)
    if spec.filter == "monotone_only":
        return label is InstanceClass.MONOTONE
    return label is InstanceClass.NONMONOTONE


def run_instance(spec: SuiteSpec, instance: Instance, seed: int) -> List[RunRecord]:
    """Every solver (and policy) of the suite on one instance, with identical budgets."""

    records = []
    for solver in spec.solvers:
        for policy in spec.policies or (None,):
            report = solve_instance(
                instance,
                solver=solver,
                policy=policy,
                config=spec.config,
                limits=spec.limits,
                seed=seed,
            )
            records.append(RunRecord.from_report(instance, report, seed))
    return records


def _count_batches(spec: SuiteSpec, n: int) -> Iterator[List[RunRecord]]:
    """Draw seeds for ``n`` objects until ``instances_per_count`` pass the filter or the draws run out."""

    kept = 0
    for index in range(spec.max_draws):
        if kept >= spec.instances_per_count:
            return
        seed = spec.seed_for(n, index)
        try:
            instance = sample_instance(spec.world, n, seed)
        except SamplingExhausted as exc:
            logger.warning("skipping n=%d seed=%d: %s", n, seed, exc)
            continue
        if not _wanted(spec, instance, seed):
            continue
        kept += 1
        logger.info("n=%d kept %d/%d after %d draws", n, kept, spec.instances_per_count, index + 1)
        yield run_instance(spec, instance, seed)
    if kept < spec.instances_per_count:
        logger.warning(
            "n=%d kept only %d of %d instances in %d draws", n, kept, spec.instances_per_count, spec.max_draws
        )


def _count_job(payload: Tuple[SuiteSpec, int]) -> List[RunRecord]:
    spec, n = payload
    return [record for batch in _count_batches(spec, n) for record in batch]


@dataclass
class SuiteResult:
    records: List[RunRecord]
    summary: Dict[Tuple[str, str, int], "SummaryRow"]
    interrupted: bool = False


def run_suite(spec: SuiteSpec) -> SuiteResult:
    """Run the whole suite; a keyboard interrupt keeps the records gathered so far."""

    records: List[RunRecord] = []
    interrupted = False
    try:
        if spec.workers > 1:
            jobs = [(spec, n) for n in spec.object_counts]
            with ProcessPoolExecutor(max_workers=spec.workers) as pool:
                for batch in pool.map(_count_job, jobs):
                    records.extend(batch)
        else:
            for n in spec.object_counts:
                for batch in _count_batches(spec, n):
                    records.extend(batch)
    except KeyboardInterrupt:
        interrupted = True
        logger.warning("suite interrupted after %d records", len(records))
    records.sort(key=RunRecord.sort_key)
    return SuiteResult(records=records, summary=summarize(records), interrupted=interrupted)


@dataclass(frozen=True)
class SummaryRow:
    solver: str
    policy: str
    n: int
    runs: int
    solved: int
    success_rate: float
    mean_total_ms: float
    mean_verify_ms: float
    mean_other_ms: float
    mean_planner_calls: float
    mean_buffers: float


def summarize(records: Iterable[RunRecord]) -> Dict[Tuple[str, str, int], SummaryRow]:
    """Aggregate per (solver, policy, n); buffer means are over solved runs only."""

    groups: Dict[Tuple[str, str, int], List[RunRecord]] = {}
    for record in sorted(records, key=RunRecord.sort_key):
        groups.setdefault((record.solver, record.policy, record.n), []).append(record)
    summary = {}
    for key in sorted(groups):
        group = groups[key]
        solved = [record for record in group if record.solved]
        summary[key] = SummaryRow(
            solver=key[0],
            policy=key[1],
            n=key[2],
            runs=len(group),
            solved=len(solved),
            success_rate=len(solved) / len(group),
            mean_total_ms=fmean(record.total_ms for record in group),
            mean_verify_ms=fmean(record.verify_ms for record in group),
            mean_other_ms=fmean(record.other_ms for record in group),
            mean_planner_calls=fmean(record.planner_calls for record in group),
            mean_buffers=fmean(record.buffers for record in solved) if solved else 0.0,
        )
    return summary


def write_csv(records: Sequence[RunRecord], path: str | Path) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for record in sorted(records, key=RunRecord.sort_key):
                writer.writerow(record.row())
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def _parse_row(row: Mapping[str, str], line: int) -> RunRecord:
    try:
        return RunRecord(
            instance_id=row["instance_id"],
            solver=row["solver"],
            policy=row["policy"],
            n=int(row["n"]),
            solved=row["solved"] == "true",
            total_ms=float(row["total_ms"]),
            verify_ms=float(row["verify_ms"]),
            other_ms=float(row["other_ms"]),
            planner_calls=int(row["planner_calls"]),
            buffers=int(row["buffers"]),
            seed=int(row["seed"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(str(exc), field="row", line=line) from exc


def read_csv(path: str | Path) -> List[RunRecord]:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise ParseError(f"expected columns {','.join(CSV_COLUMNS)}", field="header", line=1)
            return [_parse_row(row, line) for line, row in enumerate(reader, start=2)]
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc


__all__ = [
    "CSV_COLUMNS",
    "FILTERS",
    "InstanceClass",
    "SEED_STRIDE",
    "RunRecord",
    "SuiteResult",
    "SuiteSpec",
    "SummaryRow",
    "classify_instance",
    "load_suite",
    "read_csv",
    "run_instance",
    "run_suite",
    "suite_from_dict",
    "summarize",
    "write_csv",
]
