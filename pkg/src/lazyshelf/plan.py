"""Rearrangement plans: ordered pick-and-place actions, persistence and replay checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from .core.geometry import Point2
from .core.models import Arrangement, Instance, ObjectId
from .core.world import apply_move
from .errors import BranchNotVerified, OutOfWorkspace, ParseError, PlacementCollision
from .manipulation.motion import TRANSFER, TRANSIT, MotionPath, replay_paths
from .monotone.tree import EdgeKind, TreeNode
from .storage.instances import read_json, write_json

ACTION_KINDS = (EdgeKind.GOAL.value, EdgeKind.BUFFER.value)


@dataclass(frozen=True)
class PlanAction:
    object: ObjectId
    source: Point2
    target: Point2
    kind: str
    transit: MotionPath
    transfer: MotionPath

    def __post_init__(self) -> None:
        if self.kind not in ACTION_KINDS:
            raise ValueError(f"action kind must be one of {ACTION_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class Plan:
    actions: Tuple[PlanAction, ...]
    stats: Mapping[str, Any] = field(default_factory=dict)

    @property
    def buffers_used(self) -> int:
        return sum(1 for action in self.actions if action.kind == EdgeKind.BUFFER.value)

    def __len__(self) -> int:
        return len(self.actions)

    def moves_per_object(self) -> Dict[ObjectId, int]:
        counts: Dict[ObjectId, int] = {}
        for action in self.actions:
            counts[action.object] = counts.get(action.object, 0) + 1
        return counts


def plan_from_branch(branch: Sequence[TreeNode], stats: Mapping[str, Any] | None = None) -> Plan:
    """Turn a verified root-to-goal branch into a plan."""

    actions: List[PlanAction] = []
    for node in branch[1:]:
        parent = node.parent
        if not node.verified or node.edge_paths is None or parent is None or node.moved_object is None:
            raise BranchNotVerified(f"edge into {node} has not been verified")
        obj = node.moved_object
        actions.append(
            PlanAction(
                object=obj,
                source=parent.arrangement[obj],
                target=node.arrangement[obj],
                kind=node.edge_kind.value,
                transit=node.edge_paths.transit,
                transfer=node.edge_paths.transfer,
            )
        )
    return Plan(tuple(actions), dict(stats or {}))


@dataclass(frozen=True)
class ReplayReport:
    final: Arrangement
    problems: Tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.problems


def replay_plan(plan: Plan, instance: Instance) -> ReplayReport:
    """Execute ``plan`` from the instance start, checking every placement and path."""

    world = instance.world
    current = instance.start
    problems: List[str] = []
    for step, action in enumerate(plan.actions, start=1):
        obj = action.object
        if obj not in current:
            problems.append(f"step {step}: unknown object {obj}")
            break
        if current[obj] != action.source:
            problems.append(f"step {step}: {obj} is not at the recorded source")
        if action.transit.waypoints[0] != world.staging_point or action.transit.waypoints[-1] != current[obj]:
            problems.append(f"step {step}: transit does not run from staging to {obj}")
        if action.transfer.waypoints[0] != current[obj] or action.transfer.waypoints[-1] != action.target:
            problems.append(f"step {step}: transfer does not run from source to target")
        if not replay_paths(action.transit, current, obj, world):
            problems.append(f"step {step}: transit of {obj} collides")
        if not replay_paths(action.transfer, current, obj, world):
            problems.append(f"step {step}: transfer of {obj} collides")
        try:
            current = apply_move(current, obj, action.target, world)
        except (PlacementCollision, OutOfWorkspace) as exc:
            problems.append(f"step {step}: {exc}")
            break
    if not problems and current != instance.goal:
        problems.append("final arrangement differs from the goal")
    return ReplayReport(final=current, problems=tuple(problems))


def _coords(points: Sequence[Point2]) -> List[List[float]]:
    return [[p.x, p.y] for p in points]


def plan_to_dict(plan: Plan) -> Dict[str, Any]:
    return {
        "actions": [
            {
                "object": action.object,
                "from": [action.source.x, action.source.y],
                "to": [action.target.x, action.target.y],
                "kind": action.kind,
                "transit": _coords(action.transit.waypoints),
                "transfer": _coords(action.transfer.waypoints),
            }
            for action in plan.actions
        ],
        "buffers_used": plan.buffers_used,
        "stats": dict(plan.stats),
    }


def _parse_point(raw: Any, field: str) -> Point2:
    if not isinstance(raw, list) or len(raw) != 2:
        raise ParseError(f"expected [x, y], got {raw!r}", field=field)
    try:
        return Point2(float(raw[0]), float(raw[1]))
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), field=field) from exc


def plan_from_dict(raw: Any) -> Plan:
    if not isinstance(raw, dict):
        raise ParseError("plan payload must be a JSON object", field="<root>")
    if "actions" not in raw:
        raise ParseError("missing required key 'actions'", field="actions")
    actions: List[PlanAction] = []
    for index, item in enumerate(raw["actions"]):
        prefix = f"actions[{index}]"
        if not isinstance(item, dict):
            raise ParseError("expected an object", field=prefix)
        for key in ("object", "from", "to", "kind", "transit", "transfer"):
            if key not in item:
                raise ParseError(f"missing required key {key!r}", field=f"{prefix}.{key}")
        obj = item["object"]
        if item["kind"] not in ACTION_KINDS:
            raise ParseError(f"unknown kind {item['kind']!r}", field=f"{prefix}.kind")
        transit = [_parse_point(p, f"{prefix}.transit") for p in item["transit"]]
        transfer = [_parse_point(p, f"{prefix}.transfer") for p in item["transfer"]]
        if not transit or not transfer:
            raise ParseError("paths need at least one waypoint", field=prefix)
        actions.append(
            PlanAction(
                object=str(obj),
                source=_parse_point(item["from"], f"{prefix}.from"),
                target=_parse_point(item["to"], f"{prefix}.to"),
                kind=item["kind"],
                transit=MotionPath(tuple(transit), TRANSIT),
                transfer=MotionPath(tuple(transfer), TRANSFER, carried_object=str(obj)),
            )
        )
    stats = raw.get("stats") or {}
    if not isinstance(stats, dict):
        raise ParseError("expected an object", field="stats")
    return Plan(tuple(actions), stats)


def save_plan(plan: Plan, path: str | Path) -> None:
    write_json(plan_to_dict(plan), path)


def load_plan(path: str | Path) -> Plan:
    return plan_from_dict(read_json(path))


__all__ = [
    "ACTION_KINDS",
    "Plan",
    "PlanAction",
    "ReplayReport",
    "load_plan",
    "plan_from_branch",
    "plan_from_dict",
    "plan_to_dict",
    "replay_plan",
    "save_plan",
]
