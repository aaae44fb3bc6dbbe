"""JSON persistence for worlds and rearrangement instances."""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping

from ..core.geometry import Point2, Rect
from ..core.models import Arrangement, Instance, WorldSpec
from ..errors import IOFailure, ParseError

DEFAULT_WORLD_PATH = Path(__file__).resolve().parents[3] / "data" / "default_world.json"


def _require(raw: Mapping[str, Any], key: str, context: str) -> Any:
    if key not in raw:
        raise ParseError(f"missing required key {key!r}", field=f"{context}{key}")
    return raw[key]


def _number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ParseError(f"expected a finite number, got {value!r}", field=field)
    return float(value)


def _point(value: Any, field: str) -> Point2:
    if not isinstance(value, list) or len(value) != 2:
        raise ParseError(f"expected [x, y], got {value!r}", field=field)
    return Point2(_number(value[0], f"{field}[0]"), _number(value[1], f"{field}[1]"))


def world_from_dict(raw: Any, context: str = "world.") -> WorldSpec:
    """Build a :class:`WorldSpec` from its JSON object."""

    if not isinstance(raw, dict):
        raise ParseError("expected an object", field=context.rstrip("."))
    corners = _require(raw, "workspace", context)
    if not isinstance(corners, list) or len(corners) != 4:
        raise ParseError("expected [x0, y0, x1, y1]", field=f"{context}workspace")
    x0, y0, x1, y1 = (_number(value, f"{context}workspace") for value in corners)
    grasp_count = _require(raw, "grasp_count", context)
    if isinstance(grasp_count, bool) or not isinstance(grasp_count, int):
        raise ParseError(f"expected an integer, got {grasp_count!r}", field=f"{context}grasp_count")
    try:
        return WorldSpec(
            workspace=Rect(Point2(x0, y0), Point2(x1, y1)),
            object_radius=_number(_require(raw, "object_radius", context), f"{context}object_radius"),
            gripper_radius=_number(_require(raw, "gripper_radius", context), f"{context}gripper_radius"),
            wrist_length=_number(_require(raw, "wrist_length", context), f"{context}wrist_length"),
            grid_resolution=_number(_require(raw, "grid_resolution", context), f"{context}grid_resolution"),
            grasp_count=grasp_count,
        )
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), field=context.rstrip(".")) from exc


def world_to_dict(world: WorldSpec) -> Dict[str, Any]:
    area = world.workspace
    return {
        "workspace": [area.min.x, area.min.y, area.max.x, area.max.y],
        "object_radius": world.object_radius,
        "gripper_radius": world.gripper_radius,
        "wrist_length": world.wrist_length,
        "grid_resolution": world.grid_resolution,
        "grasp_count": world.grasp_count,
    }


def _arrangement(raw: Any, objects: List[str], field: str) -> Arrangement:
    if not isinstance(raw, dict):
        raise ParseError("expected an object mapping ids to [x, y]", field=field)
    missing = [obj for obj in objects if obj not in raw]
    if missing:
        raise ParseError(f"missing placements for {', '.join(missing)}", field=field)
    extra = sorted(set(raw) - set(objects))
    if extra:
        raise ParseError(f"unknown objects {', '.join(extra)}", field=field)
    return Arrangement.of({obj: _point(raw[obj], f"{field}.{obj}") for obj in objects}, objects)


def instance_from_dict(raw: Any, instance_id: str = "") -> Instance:
    """Build an :class:`Instance` from the instance JSON schema."""

    if not isinstance(raw, dict):
        raise ParseError("instance payload must be a JSON object", field="<root>")
    world = world_from_dict(_require(raw, "world", ""))
    objects = _require(raw, "objects", "")
    if not isinstance(objects, list) or not objects or not all(isinstance(obj, str) for obj in objects):
        raise ParseError("expected a non-empty list of object ids", field="objects")
    if len(set(objects)) != len(objects):
        raise ParseError("object ids must be unique", field="objects")
    start = _arrangement(_require(raw, "start", ""), objects, "start")
    goal = _arrangement(_require(raw, "goal", ""), objects, "goal")
    return Instance(
        world=world,
        objects=tuple(objects),
        start=start,
        goal=goal,
        instance_id=str(raw.get("id") or instance_id),
    )


def instance_to_dict(instance: Instance) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "world": world_to_dict(instance.world),
        "objects": list(instance.objects),
        "start": {obj: [p.x, p.y] for obj, p in instance.start.items()},
        "goal": {obj: [p.x, p.y] for obj, p in instance.goal.items()},
    }
    if instance.instance_id:
        payload["id"] = instance.instance_id
    return payload


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, field=str(path), line=exc.lineno) from exc


def write_json(payload: Any, path: str | Path) -> None:
    """Write ``payload`` as pretty JSON, creating parent directories."""

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def save_instance(instance: Instance, path: str | Path) -> None:
    write_json(instance_to_dict(instance), path)


def load_instance(path: str | Path) -> Instance:
    path = Path(path)
    return instance_from_dict(read_json(path), instance_id=path.stem)


def load_world(path: str | Path | None = None) -> WorldSpec:
    """Load a world file; the bundled desk-scale world when no path is given."""

    resolved = Path(path) if path else DEFAULT_WORLD_PATH
    return world_from_dict(read_json(resolved), context="")


__all__ = [
    "DEFAULT_WORLD_PATH",
    "instance_from_dict",
    "instance_to_dict",
    "load_instance",
    "load_world",
    "read_json",
    "save_instance",
    "world_from_dict",
    "world_to_dict",
    "write_json",
]
