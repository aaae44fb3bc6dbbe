"""Abstract grasp model: fanned approach headings and their swept footprints."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math
from typing import Mapping, Set, Tuple, TypeVar

from ..core.geometry import Capsule, Disc, Point2, Shape, shape_endpoints, shape_intersects_disc
from ..core.models import WorldSpec

Label = TypeVar("Label")

_WALL_EPS = 1e-9


@dataclass(frozen=True)
class GraspPose:
    """A gripper pose at ``target`` entering along ``heading`` (radians from the inward normal).

    The footprint is the gripper disc at the target plus, when the wrist has length,
    a capsule running from the target back toward the open side.
    """

    target: Point2
    heading: float
    footprint: Tuple[Shape, ...]

    def __post_init__(self) -> None:
        if not self.footprint:
            raise ValueError("A grasp footprint needs at least one shape")
        first = self.footprint[0]
        if not isinstance(first, Disc) or first.center != self.target:
            raise ValueError("The first footprint shape must be the gripper disc at the target")

    @property
    def direction(self) -> Tuple[float, float]:
        return (math.sin(self.heading), math.cos(self.heading))

    @property
    def wrist_end(self) -> Point2:
        _, end, _ = shape_endpoints(self.footprint[-1])
        return end


def grasp_headings(grasp_count: int) -> list[float]:
    """Headings fanned evenly across the open half-plane, left to right in degrees -90..90."""

    step = 180.0 / (grasp_count + 1)
    return [math.radians(-90.0 + i * step) for i in range(1, grasp_count + 1)]


@lru_cache(maxsize=4096)
def generate_grasps(world: WorldSpec, target: Point2) -> Tuple[GraspPose, ...]:
    """The ``world.grasp_count`` candidate grasps of an object sitting at ``target``."""

    poses = []
    for heading in grasp_headings(world.grasp_count):
        gripper = Disc(target, world.gripper_radius)
        if world.wrist_length > 0:
            hx, hy = math.sin(heading), math.cos(heading)
            tail = target.offset(-world.wrist_length * hx, -world.wrist_length * hy)
            footprint: Tuple[Shape, ...] = (gripper, Capsule(target, tail, world.gripper_radius))
        else:
            footprint = (gripper,)
        poses.append(GraspPose(target=target, heading=heading, footprint=footprint))
    return tuple(poses)


def wall_blocked(grasp: GraspPose, world: WorldSpec) -> bool:
    """True when the footprint crosses the left, right or back wall; the front is open."""

    area = world.workspace
    for shape in grasp.footprint:
        a, b, radius = shape_endpoints(shape)
        for point in (a, b):
            if point.x - radius < area.min.x - _WALL_EPS:
                return True
            if point.x + radius > area.max.x + _WALL_EPS:
                return True
            if point.y + radius > area.max.y + _WALL_EPS:
                return True
    return False


def blocked_by(grasp: GraspPose, other_positions: Mapping[Label, Point2], world: WorldSpec) -> Set[Label]:
    """Labels whose object disc overlaps any shape of the grasp footprint."""

    hits: Set[Label] = set()
    for label, position in other_positions.items():
        disc = world.object_disc(position)
        if any(shape_intersects_disc(shape, disc) for shape in grasp.footprint):
            hits.add(label)
    return hits


def grasp_is_free(grasp: GraspPose, other_positions: Mapping[Label, Point2], world: WorldSpec) -> bool:
    return not wall_blocked(grasp, world) and not blocked_by(grasp, other_positions, world)


__all__ = [
    "GraspPose",
    "blocked_by",
    "generate_grasps",
    "grasp_headings",
    "grasp_is_free",
    "wall_blocked",
]
