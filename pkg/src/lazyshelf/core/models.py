"""Core data structures for rearrangement problems."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, Mapping, Optional, Sequence

from .geometry import Disc, Point2, Rect

ObjectId = str


@dataclass(frozen=True)
class WorldSpec:
    """A shelf-like workspace entered by the gripper from its front side (``y = min``)."""

    workspace: Rect
    object_radius: float
    gripper_radius: float
    wrist_length: float
    grid_resolution: float
    grasp_count: int = 1
    open_side: str = "front"

    def __post_init__(self) -> None:
        if not self.object_radius > 0:
            raise ValueError("object_radius must be positive")
        if not self.gripper_radius > 0:
            raise ValueError("gripper_radius must be positive")
        if not self.grid_resolution > 0:
            raise ValueError("grid_resolution must be positive")
        if self.wrist_length < 0:
            raise ValueError("wrist_length must not be negative")
        if self.grasp_count < 1:
            raise ValueError("grasp_count must be at least 1")
        if self.open_side != "front":
            raise ValueError(f"Only the front side can be open, got {self.open_side!r}")

    @property
    def transfer_radius(self) -> float:
        """Radius of the moving body while an object is carried."""
        return max(self.gripper_radius, self.object_radius)

    @property
    def staging_point(self) -> Point2:
        """Where every transit starts: centred, one gripper diameter outside the open side."""
        return Point2(self.workspace.center.x, self.workspace.min.y - 2.0 * self.gripper_radius)

    def object_disc(self, position: Point2) -> Disc:
        return Disc(position, self.object_radius)


@dataclass(frozen=True)
class PositionGrid:
    """Candidate goal and buffer positions, row-major from the front-left corner."""

    positions: tuple[Point2, ...]
    resolution: float
    _index: Dict[Point2, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.positions)})

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self) -> Iterator[Point2]:
        return iter(self.positions)

    def __getitem__(self, index: int) -> Point2:
        return self.positions[index]

    def index_of(self, position: Point2) -> Optional[int]:
        return self._index.get(position)


@dataclass(frozen=True)
class Arrangement:
    """Immutable assignment of every object to a position, in instance object order."""

    placement: tuple[tuple[ObjectId, Point2], ...]
    _lookup: Dict[ObjectId, Point2] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        lookup = dict(self.placement)
        if len(lookup) != len(self.placement):
            raise ValueError("Arrangement lists an object twice")
        object.__setattr__(self, "_lookup", lookup)

    @classmethod
    def of(cls, mapping: Mapping[ObjectId, Point2], order: Optional[Sequence[ObjectId]] = None) -> "Arrangement":
        keys = list(order) if order is not None else list(mapping)
        return cls(tuple((obj, mapping[obj]) for obj in keys))

    def __getitem__(self, obj: ObjectId) -> Point2:
        return self._lookup[obj]

    def __contains__(self, obj: object) -> bool:
        return obj in self._lookup

    def __len__(self) -> int:
        return len(self.placement)

    @property
    def objects(self) -> tuple[ObjectId, ...]:
        return tuple(obj for obj, _ in self.placement)

    def items(self) -> tuple[tuple[ObjectId, Point2], ...]:
        return self.placement

    def as_dict(self) -> Dict[ObjectId, Point2]:
        return dict(self._lookup)

    def moved(self, obj: ObjectId, position: Point2) -> "Arrangement":
        """Copy with ``obj`` relocated; no validity checks (see ``world.apply_move``)."""
        if obj not in self._lookup:
            raise KeyError(obj)
        return Arrangement(tuple((o, position if o == obj else p) for o, p in self.placement))

    def differing_objects(self, other: "Arrangement") -> list[ObjectId]:
        return [obj for obj, p in self.placement if other._lookup.get(obj) != p]


@dataclass(frozen=True)
class Instance:
    """A rearrangement task: move ``objects`` from ``start`` to ``goal`` inside ``world``."""

    world: WorldSpec
    objects: tuple[ObjectId, ...]
    start: Arrangement
    goal: Arrangement
    instance_id: str = ""

    def __post_init__(self) -> None:
        if set(self.start.objects) != set(self.objects) or set(self.goal.objects) != set(self.objects):
            raise ValueError("start and goal must place exactly the instance objects")

    @property
    def size(self) -> int:
        return len(self.objects)

    def with_start(self, start: Arrangement) -> "Instance":
        """The local task that treats ``start`` as the starting arrangement."""
        return replace(self, start=start)

    def at_goal(self, arrangement: Arrangement, obj: ObjectId) -> bool:
        return arrangement[obj] == self.goal[obj]

    def not_at_goal(self, arrangement: Arrangement) -> list[ObjectId]:
        return [obj for obj in self.objects if arrangement[obj] != self.goal[obj]]


__all__ = ["Arrangement", "Instance", "ObjectId", "PositionGrid", "WorldSpec"]
