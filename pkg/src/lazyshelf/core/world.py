"""Candidate-position grid, arrangement moves, instance sampling and state keys."""

from __future__ import annotations

from functools import lru_cache
import math
from typing import List, Optional

import numpy as np

from ..errors import EmptyGrid, OutOfWorkspace, PlacementCollision, RearrangementError, SamplingExhausted
from .geometry import Point2, disc_disc_intersect, disc_in_rect
from .models import Arrangement, Instance, ObjectId, PositionGrid, WorldSpec

MAX_REJECTION_ROUNDS = 10_000
_AXIS_EPS = 1e-9


def _axis(low: float, high: float, step: float) -> List[float]:
    if high < low:
        return []
    count = int(math.floor((high - low) / step + _AXIS_EPS)) + 1
    return [min(float(value), high) for value in low + step * np.arange(count)]


@lru_cache(maxsize=64)
def build_grid(world: WorldSpec) -> PositionGrid:
    """Lattice of candidate positions spaced ``grid_resolution`` apart, inset by the object radius."""

    radius = world.object_radius
    area = world.workspace
    xs = _axis(area.min.x + radius, area.max.x - radius, world.grid_resolution)
    ys = _axis(area.min.y + radius, area.max.y - radius, world.grid_resolution)
    if not xs or not ys:
        raise EmptyGrid(
            f"No object of radius {radius} fits in a {area.width} x {area.height} workspace"
        )
    positions = tuple(Point2(x, y) for y in ys for x in xs)
    return PositionGrid(positions=positions, resolution=world.grid_resolution)


def placement_collides(arrangement: Arrangement, obj: ObjectId, position: Point2, world: WorldSpec) -> bool:
    """True when ``obj`` placed at ``position`` leaves the workspace or overlaps another object."""

    disc = world.object_disc(position)
    if not disc_in_rect(disc, world.workspace):
        return True
    return any(
        other != obj and disc_disc_intersect(disc, world.object_disc(placed))
        for other, placed in arrangement.items()
    )


def apply_move(arrangement: Arrangement, obj: ObjectId, position: Point2, world: WorldSpec) -> Arrangement:
    """Return a new arrangement with ``obj`` at ``position``; the input is left untouched."""

    if obj not in arrangement:
        raise KeyError(f"Unknown object {obj}")
    disc = world.object_disc(position)
    if not disc_in_rect(disc, world.workspace):
        raise OutOfWorkspace(f"{obj} at ({position.x}, {position.y}) leaves the workspace")
    for other, placed in arrangement.items():
        if other != obj and disc_disc_intersect(disc, world.object_disc(placed)):
            raise PlacementCollision(f"{obj} at ({position.x}, {position.y}) overlaps {other}")
    if arrangement[obj] == position:
        return arrangement
    return arrangement.moved(obj, position)


def free_positions(
    arrangement: Arrangement, obj: ObjectId, grid: PositionGrid, world: WorldSpec
) -> List[Point2]:
    """Grid positions where ``obj`` could be placed at ``arrangement``, excluding where it is now."""

    current = arrangement[obj]
    return [
        position
        for position in grid
        if position != current and not placement_collides(arrangement, obj, position, world)
    ]


def check_arrangement(arrangement: Arrangement, world: WorldSpec) -> None:
    """Raise when an arrangement has an object outside the workspace or two overlapping objects."""

    items = arrangement.items()
    for index, (obj, position) in enumerate(items):
        disc = world.object_disc(position)
        if not disc_in_rect(disc, world.workspace):
            raise OutOfWorkspace(f"{obj} at ({position.x}, {position.y}) leaves the workspace")
        for other, placed in items[index + 1 :]:
            if disc_disc_intersect(disc, world.object_disc(placed)):
                raise PlacementCollision(f"{obj} overlaps {other}")


def validate_instance(instance: Instance, grid: Optional[PositionGrid] = None) -> None:
    """Check the instance invariants: valid start and goal, goals on the grid."""

    grid = grid or build_grid(instance.world)
    check_arrangement(instance.start, instance.world)
    check_arrangement(instance.goal, instance.world)
    for obj, position in instance.goal.items():
        if grid.index_of(position) is None:
            raise RearrangementError(f"goal of {obj} at ({position.x}, {position.y}) is not a grid position")


def _clear_of_each_other(positions: List[Point2], world: WorldSpec) -> bool:
    discs = [world.object_disc(position) for position in positions]
    return not any(
        disc_disc_intersect(disc, other) for index, disc in enumerate(discs) for other in discs[index + 1 :]
    )


def sample_instance(world: WorldSpec, n: int, rng_seed: int) -> Instance:
    """Random instance: free-space starts by rejection, goals a random non-overlapping n-subset of the grid."""

    grid = build_grid(world)
    if n < 1 or n > len(grid):
        raise ValueError(f"n must be between 1 and {len(grid)}, got {n}")
    rng = np.random.default_rng(rng_seed)
    radius = world.object_radius
    area = world.workspace
    objects = tuple(f"o{i}" for i in range(1, n + 1))

    starts: List[Point2] = []
    rounds = 0
    while len(starts) < n:
        if rounds >= MAX_REJECTION_ROUNDS:
            raise SamplingExhausted(f"Placed {len(starts)} of {n} objects after {rounds} rounds")
        rounds += 1
        candidate = Point2(
            float(rng.uniform(area.min.x + radius, area.max.x - radius)),
            float(rng.uniform(area.min.y + radius, area.max.y - radius)),
        )
        if all(candidate.distance_to(placed) >= 2.0 * radius for placed in starts):
            starts.append(candidate)

    goals: Optional[List[Point2]] = None
    for _ in range(MAX_REJECTION_ROUNDS):
        goal_indices = rng.choice(len(grid), size=n, replace=False)
        drawn = [grid[int(index)] for index in goal_indices]
        if _clear_of_each_other(drawn, world):
            goals = drawn
            break
    if goals is None:
        raise SamplingExhausted(f"No {n} goal slots clear of each other after {MAX_REJECTION_ROUNDS} rounds")
    return Instance(
        world=world,
        objects=objects,
        start=Arrangement(tuple(zip(objects, starts))),
        goal=Arrangement(tuple(zip(objects, goals))),
        instance_id=f"n{n}-s{rng_seed}",
    )


class StateCodec:
    """Canonical arrangement keys: ``"S"`` for an object at its start, ``"P<i>"`` for grid slot i.

    Search trees index nodes by these keys so that state identity never depends on
    floating-point comparisons of recomputed coordinates.
    """

    def __init__(self, instance: Instance, grid: Optional[PositionGrid] = None) -> None:
        self._start = instance.start
        self._objects = instance.objects
        self._grid = grid or build_grid(instance.world)

    def token(self, obj: ObjectId, position: Point2) -> str:
        if position == self._start[obj]:
            return "S"
        index = self._grid.index_of(position)
        if index is None:
            raise RearrangementError(f"{obj} at ({position.x}, {position.y}) is neither its start nor a grid slot")
        return f"P{index}"

    def key(self, arrangement: Arrangement) -> tuple[str, ...]:
        return tuple(self.token(obj, arrangement[obj]) for obj in self._objects)


__all__ = [
    "MAX_REJECTION_ROUNDS",
    "StateCodec",
    "apply_move",
    "build_grid",
    "check_arrangement",
    "free_positions",
    "placement_collides",
    "sample_instance",
    "validate_instance",
]
