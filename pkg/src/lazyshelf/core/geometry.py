"""2D collision primitives: points, discs, capsules and axis-aligned rectangles.

Collision is strict everywhere: shapes that only touch do not collide.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Iterable, Union

import numpy as np


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Point coordinates must be finite, got ({self.x}, {self.y})")

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def offset(self, dx: float, dy: float) -> "Point2":
        return Point2(self.x + dx, self.y + dy)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Disc:
    center: Point2
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"Disc radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Capsule:
    """Segment ``a``-``b`` swept by a disc; ``a == b`` degenerates to a disc."""

    a: Point2
    b: Point2
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"Capsule radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Rect:
    min: Point2
    max: Point2

    def __post_init__(self) -> None:
        if self.min.x > self.max.x or self.min.y > self.max.y:
            raise ValueError("Rect min corner must not exceed its max corner")

    @property
    def width(self) -> float:
        return self.max.x - self.min.x

    @property
    def height(self) -> float:
        return self.max.y - self.min.y

    @property
    def center(self) -> Point2:
        return Point2((self.min.x + self.max.x) / 2.0, (self.min.y + self.max.y) / 2.0)


Shape = Union[Disc, Capsule]


def point_segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    """Euclidean distance from ``p`` to the closed segment ``a``-``b``."""

    dx = b.x - a.x
    dy = b.y - a.y
    length_sq = dx * dx + dy * dy
    if length_sq == 0.0:
        return math.hypot(p.x - a.x, p.y - a.y)
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / length_sq
    t = min(1.0, max(0.0, t))
    return math.hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy))


def disc_disc_intersect(a: Disc, b: Disc) -> bool:
    return a.center.distance_to(b.center) < a.radius + b.radius


def capsule_disc_intersect(c: Capsule, d: Disc) -> bool:
    return point_segment_distance(d.center, c.a, c.b) < c.radius + d.radius


def disc_in_rect(d: Disc, r: Rect) -> bool:
    """True when the disc lies inside ``r``; boundary contact is allowed."""

    return (
        d.center.x - d.radius >= r.min.x
        and d.center.x + d.radius <= r.max.x
        and d.center.y - d.radius >= r.min.y
        and d.center.y + d.radius <= r.max.y
    )


def shape_intersects_disc(shape: Shape, disc: Disc) -> bool:
    if isinstance(shape, Capsule):
        return capsule_disc_intersect(shape, disc)
    return disc_disc_intersect(shape, disc)


def shape_endpoints(shape: Shape) -> tuple[Point2, Point2, float]:
    """Return the swept segment and radius of a footprint shape."""

    if isinstance(shape, Capsule):
        return shape.a, shape.b, shape.radius
    return shape.center, shape.center, shape.radius


def points_array(points: Iterable[Point2]) -> np.ndarray:
    """Stack points into an ``(n, 2)`` float array."""

    coords = [(p.x, p.y) for p in points]
    if not coords:
        return np.zeros((0, 2), dtype=float)
    return np.asarray(coords, dtype=float)


def segment_distances(starts: np.ndarray, ends: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Distances from every point to every segment, shape ``(segments, points)``.

    ``starts`` and ``ends`` are ``(m, 2)`` arrays, ``points`` is ``(k, 2)``.
    """

    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    ends = np.atleast_2d(np.asarray(ends, dtype=float))
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] == 0 or starts.shape[0] == 0:
        return np.zeros((starts.shape[0], points.shape[0]), dtype=float)
    direction = ends - starts
    length_sq = np.einsum("ij,ij->i", direction, direction)
    rel = points[None, :, :] - starts[:, None, :]
    safe = np.where(length_sq > 0.0, length_sq, 1.0)
    t = np.einsum("mkj,mj->mk", rel, direction) / safe[:, None]
    t = np.where(length_sq[:, None] > 0.0, np.clip(t, 0.0, 1.0), 0.0)
    closest = starts[:, None, :] + t[:, :, None] * direction[:, None, :]
    return np.linalg.norm(points[None, :, :] - closest, axis=2)


__all__ = [
    "Capsule",
    "Disc",
    "Point2",
    "Rect",
    "Shape",
    "capsule_disc_intersect",
    "disc_disc_intersect",
    "disc_in_rect",
    "point_segment_distance",
    "points_array",
    "segment_distances",
    "shape_endpoints",
    "shape_intersects_disc",
]
