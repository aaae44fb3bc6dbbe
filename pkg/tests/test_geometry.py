import math
import unittest

import numpy as np
import pytest

from lazyshelf.core.geometry import (
    Capsule,
    Disc,
    Point2,
    Rect,
    capsule_disc_intersect,
    disc_disc_intersect,
    disc_in_rect,
    point_segment_distance,
    segment_distances,
)


class GeometryTests(unittest.TestCase):
    def test_overlapping_discs_intersect(self) -> None:
        self.assertTrue(disc_disc_intersect(Disc(Point2(0, 0), 1.0), Disc(Point2(1.5, 0), 1.0)))

    def test_touching_discs_do_not_intersect(self) -> None:
        self.assertFalse(disc_disc_intersect(Disc(Point2(0, 0), 1.0), Disc(Point2(2.0, 0), 1.0)))

    def test_capsule_clips_disc_beside_segment(self) -> None:
        capsule = Capsule(Point2(0, 0), Point2(4, 0), 0.5)
        self.assertTrue(capsule_disc_intersect(capsule, Disc(Point2(2.0, 0.9), 0.5)))
        self.assertFalse(capsule_disc_intersect(capsule, Disc(Point2(2.0, 1.0), 0.5)))

    def test_capsule_endcap_uses_endpoint_distance(self) -> None:
        capsule = Capsule(Point2(0, 0), Point2(4, 0), 0.5)
        self.assertFalse(capsule_disc_intersect(capsule, Disc(Point2(5.1, 0), 0.5)))
        self.assertTrue(capsule_disc_intersect(capsule, Disc(Point2(4.9, 0), 0.5)))

    def test_zero_length_capsule_matches_disc(self) -> None:
        other = Disc(Point2(1.5, 0), 1.0)
        capsule = Capsule(Point2(0, 0), Point2(0, 0), 1.0)
        self.assertEqual(
            capsule_disc_intersect(capsule, other),
            disc_disc_intersect(Disc(Point2(0, 0), 1.0), other),
        )
        self.assertTrue(capsule_disc_intersect(capsule, other))

    def test_disc_in_rect_allows_boundary_contact(self) -> None:
        area = Rect(Point2(0, 0), Point2(4, 4))
        self.assertTrue(disc_in_rect(Disc(Point2(1, 1), 1.0), area))
        self.assertFalse(disc_in_rect(Disc(Point2(0.9, 2), 1.0), area))

    def test_invalid_values_raise(self) -> None:
        with self.assertRaises(ValueError):
            Disc(Point2(0, 0), 0.0)
        with self.assertRaises(ValueError):
            Capsule(Point2(0, 0), Point2(1, 0), -1.0)
        with self.assertRaises(ValueError):
            Point2(math.nan, 0.0)
        with self.assertRaises(ValueError):
            Rect(Point2(2, 0), Point2(1, 1))

    def test_point_segment_distance_clamps_to_endpoints(self) -> None:
        a, b = Point2(0, 0), Point2(2, 0)
        self.assertAlmostEqual(point_segment_distance(Point2(1, 3), a, b), 3.0)
        self.assertAlmostEqual(point_segment_distance(Point2(-3, 4), a, b), 5.0)
        self.assertAlmostEqual(point_segment_distance(Point2(1, 1), a, a), math.sqrt(2))


class SegmentDistanceTests(unittest.TestCase):
    def test_segment_distances_agree_with_scalar_version(self) -> None:
        starts = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, -1.0]])
        ends = np.array([[2.0, 0.0], [1.0, 1.0], [2.0, 3.0]])
        points = np.array([[1.0, 3.0], [-3.0, 4.0], [2.5, 0.5]])
        table = segment_distances(starts, ends, points)
        self.assertEqual(table.shape, (3, 3))
        for i, (start, end) in enumerate(zip(starts, ends)):
            for j, point in enumerate(points):
                expected = point_segment_distance(Point2(*point), Point2(*start), Point2(*end))
                self.assertAlmostEqual(table[i, j], expected)

    def test_segment_distances_with_no_points_is_empty(self) -> None:
        table = segment_distances(np.array([[0.0, 0.0]]), np.array([[1.0, 0.0]]), np.zeros((0, 2)))
        self.assertEqual(table.shape, (1, 0))


def _random_point(rng: np.random.Generator, scale: float) -> Point2:
    x, y = rng.uniform(-scale, scale, 2)
    return Point2(float(x), float(y))


@pytest.mark.slow
class RandomizedGeometryTests(unittest.TestCase):
    CASES = 10_000
    SAMPLES = 1_000

    def test_capsule_test_agrees_with_dense_sampling(self) -> None:
        rng = np.random.default_rng(7)
        steps = np.linspace(0.0, 1.0, self.SAMPLES)
        decided = 0
        for _ in range(self.CASES):
            a = _random_point(rng, 5.0)
            b = a.offset(*(float(v) for v in rng.uniform(-3.0, 3.0, 2)))
            capsule = Capsule(a, b, float(rng.uniform(0.1, 1.5)))
            disc = Disc(_random_point(rng, 6.0), float(rng.uniform(0.1, 1.5)))
            reach = capsule.radius + disc.radius
            samples = np.array([a.as_tuple()]) + steps[:, None] * np.array([[b.x - a.x, b.y - a.y]])
            nearest = float(np.min(np.hypot(samples[:, 0] - disc.center.x, samples[:, 1] - disc.center.y)))
            spacing = a.distance_to(b) / (self.SAMPLES - 1)
            if nearest < reach - 1e-9:
                expected = True
            elif nearest >= reach + spacing / 2 + 1e-6:
                expected = False
            else:
                continue
            decided += 1
            self.assertEqual(capsule_disc_intersect(capsule, disc), expected, (capsule, disc))
        self.assertGreater(decided, 0.98 * self.CASES)

    def test_disc_test_is_symmetric(self) -> None:
        rng = np.random.default_rng(11)
        for _ in range(self.CASES):
            first = Disc(_random_point(rng, 3.0), float(rng.uniform(0.1, 2.0)))
            second = Disc(_random_point(rng, 3.0), float(rng.uniform(0.1, 2.0)))
            self.assertEqual(disc_disc_intersect(first, second), disc_disc_intersect(second, first))

    def test_wider_capsules_never_lose_a_contact(self) -> None:
        rng = np.random.default_rng(13)
        for _ in range(self.CASES):
            a, b = _random_point(rng, 5.0), _random_point(rng, 5.0)
            disc = Disc(_random_point(rng, 6.0), float(rng.uniform(0.1, 1.5)))
            radius = float(rng.uniform(0.1, 1.5))
            wider = radius + float(rng.uniform(0.0, 1.0))
            if capsule_disc_intersect(Capsule(a, b, radius), disc):
                self.assertTrue(capsule_disc_intersect(Capsule(a, b, wider), disc))