"""Bundled worlds and hand-built scenes used by demos, tests and the bench suites."""

from __future__ import annotations

from typing import Dict, Sequence

from .core.geometry import Point2, Rect
from .core.models import Arrangement, Instance, ObjectId, WorldSpec
from .core.world import build_grid
from .storage.instances import load_world


def default_world() -> WorldSpec:
    """The desk-scale shelf shipped in ``data/default_world.json``."""
    return load_world()


def open_world() -> WorldSpec:
    """A wide, sparsely used shelf where short grasps never overlap."""

    return WorldSpec(
        workspace=Rect(Point2(0.0, 0.0), Point2(20.0, 12.0)),
        object_radius=0.3,
        gripper_radius=0.2,
        wrist_length=0.5,
        grid_resolution=1.0,
        grasp_count=3,
    )


def _instance(
    world: WorldSpec,
    start: Dict[ObjectId, Point2],
    goal: Dict[ObjectId, Point2],
    instance_id: str,
) -> Instance:
    objects: Sequence[ObjectId] = tuple(start)
    return Instance(
        world=world,
        objects=tuple(objects),
        start=Arrangement.of(start, objects),
        goal=Arrangement.of(goal, objects),
        instance_id=instance_id,
    )


def free_scene(n: int = 3) -> Instance:
    """``n`` objects spaced three units apart; every move is possible in any order."""

    world = open_world()
    grid = build_grid(world)
    columns = sum(1 for p in grid if p.y == grid[0].y)
    if not 1 <= n <= columns // 3:
        raise ValueError(f"free scenes hold between 1 and {columns // 3} objects")
    start = {f"o{i + 1}": Point2(1.5 + 3.0 * i, 2.0) for i in range(n)}
    goal = {f"o{i + 1}": grid[10 * columns + 3 * i + 1] for i in range(n)}
    return _instance(world, start, goal, f"free-{n}")


def swap_world() -> WorldSpec:
    return WorldSpec(
        workspace=Rect(Point2(0.0, 0.0), Point2(7.2, 2.4)),
        object_radius=0.5,
        gripper_radius=0.4,
        wrist_length=2.0,
        grid_resolution=1.2,
        grasp_count=1,
    )


def swap_scene() -> Instance:
    """Two objects in a shallow shelf, each sitting in front of the other's goal.

    The only grasp enters straight from the front, so neither goal can be reached
    before the other object leaves its start: one buffer move is required.
    """

    world = swap_world()
    grid = build_grid(world)
    front_left, front_right = grid[1], grid[4]
    back_left, back_right = grid[7], grid[10]
    return _instance(
        world,
        start={"o1": front_right, "o2": front_left},
        goal={"o1": back_left, "o2": back_right},
        instance_id="swap",
    )


def walled_goal_scene() -> Instance:
    """One object whose goal sits against the left wall, where the wide gripper never fits."""

    world = WorldSpec(
        workspace=Rect(Point2(0.0, 0.0), Point2(6.0, 4.0)),
        object_radius=0.5,
        gripper_radius=0.6,
        wrist_length=1.0,
        grid_resolution=1.0,
        grasp_count=1,
    )
    grid = build_grid(world)
    return _instance(world, {"o1": Point2(3.0, 2.0)}, {"o1": grid[0]}, "walled-goal")


def fan_world() -> WorldSpec:
    """Two grasps at -30 and +30 degrees with a two-unit wrist."""

    return WorldSpec(
        workspace=Rect(Point2(0.0, 0.0), Point2(10.0, 6.0)),
        object_radius=0.5,
        gripper_radius=0.4,
        wrist_length=2.0,
        grid_resolution=1.25,
        grasp_count=2,
    )


def mixed_block_scene() -> Instance:
    """o3's right grasp is blocked by o2's goal and its left grasp by o1's start."""

    return _instance(
        fan_world(),
        start={"o1": Point2(2.25, 1.7), "o2": Point2(6.0, 4.5), "o3": Point2(3.0, 3.0)},
        goal={"o1": Point2(5.5, 2.0), "o2": Point2(3.75, 1.7), "o3": Point2(8.0, 4.5)},
        instance_id="mixed-block",
    )


def goal_block_scene() -> Instance:
    """o3's two grasps are blocked by the goals of o2 and o1, so o3 must move before both."""

    return _instance(
        fan_world(),
        start={"o1": Point2(6.0, 1.5), "o2": Point2(6.0, 4.5), "o3": Point2(3.0, 3.0)},
        goal={"o1": Point2(2.25, 1.7), "o2": Point2(3.75, 1.7), "o3": Point2(8.0, 4.5)},
        instance_id="goal-block",
    )


__all__ = [
    "default_world",
    "fan_world",
    "free_scene",
    "goal_block_scene",
    "mixed_block_scene",
    "open_world",
    "swap_scene",
    "swap_world",
    "walled_goal_scene",
]
