import math
import unittest

from lazyshelf.core.geometry import Capsule, Disc, Point2, Rect
from lazyshelf.core.models import WorldSpec
from lazyshelf.manipulation.grasps import (
    GraspPose,
    blocked_by,
    generate_grasps,
    grasp_headings,
    grasp_is_free,
    wall_blocked,
)
from lazyshelf.sample_scenes import fan_world, walled_goal_scene


class HeadingTests(unittest.TestCase):
    def test_headings_fan_evenly_across_open_side(self) -> None:
        expected = {1: [0.0], 2: [-30.0, 30.0], 3: [-45.0, 0.0, 45.0]}
        for count, degrees in expected.items():
            headings = [math.degrees(h) for h in grasp_headings(count)]
            self.assertEqual(len(headings), len(degrees))
            for heading, value in zip(headings, degrees):
                self.assertAlmostEqual(heading, value)


class GraspTests(unittest.TestCase):
    def setUp(self) -> None:
        self.world = fan_world()
        self.target = Point2(3.0, 3.0)
        self.grasps = generate_grasps(self.world, self.target)

    def test_one_grasp_per_heading_with_wrist_toward_the_front(self) -> None:
        self.assertEqual(len(self.grasps), 2)
        right, left = self.grasps
        self.assertAlmostEqual(right.wrist_end.x, 4.0)
        self.assertAlmostEqual(right.wrist_end.y, 3.0 - math.sqrt(3.0))
        self.assertAlmostEqual(left.wrist_end.x, 2.0)
        for grasp in self.grasps:
            self.assertIsInstance(grasp.footprint[0], Disc)
            self.assertIsInstance(grasp.footprint[1], Capsule)
            self.assertEqual(grasp.footprint[0].center, self.target)
            dx, dy = grasp.direction
            self.assertAlmostEqual(dx * dx + dy * dy, 1.0)
            self.assertGreater(dy, 0.0)

    def test_blockers_along_the_wrist(self) -> None:
        labels = {
            "S1": Point2(3.55, 2.0474),
            "G4": Point2(4.1, 1.0948),
            "far": Point2(6.0, 3.0),
        }
        self.assertEqual(blocked_by(self.grasps[0], labels, self.world), {"S1", "G4"})
        self.assertEqual(blocked_by(self.grasps[1], labels, self.world), set())
        self.assertFalse(grasp_is_free(self.grasps[0], labels, self.world))
        self.assertTrue(grasp_is_free(self.grasps[1], labels, self.world))

    def test_grasps_are_cached_per_site(self) -> None:
        self.assertIs(generate_grasps(self.world, self.target), self.grasps)

    def test_zero_length_wrist_keeps_only_the_gripper_disc(self) -> None:
        world = WorldSpec(
            workspace=Rect(Point2(0, 0), Point2(5, 5)),
            object_radius=0.5,
            gripper_radius=0.3,
            wrist_length=0.0,
            grid_resolution=1.0,
            grasp_count=2,
        )
        for grasp in generate_grasps(world, Point2(2.0, 2.0)):
            self.assertEqual(len(grasp.footprint), 1)
            self.assertEqual(grasp.wrist_end, Point2(2.0, 2.0))

    def test_footprint_must_start_with_gripper_disc(self) -> None:
        with self.assertRaises(ValueError):
            GraspPose(target=Point2(0, 0), heading=0.0, footprint=())
        with self.assertRaises(ValueError):
            GraspPose(target=Point2(0, 0), heading=0.0, footprint=(Disc(Point2(1, 0), 0.5),))


class WallTests(unittest.TestCase):
    def setUp(self) -> None:
        self.instance = walled_goal_scene()
        self.world = self.instance.world

    def test_wide_gripper_in_corner_hits_the_side_wall(self) -> None:
        (grasp,) = generate_grasps(self.world, self.instance.goal["o1"])
        self.assertTrue(wall_blocked(grasp, self.world))
        self.assertFalse(grasp_is_free(grasp, {}, self.world))

    def test_central_grasp_clears_every_wall(self) -> None:
        (grasp,) = generate_grasps(self.world, self.instance.start["o1"])
        self.assertFalse(wall_blocked(grasp, self.world))
        self.assertTrue(grasp_is_free(grasp, {}, self.world))

    def test_back_wall_is_closed(self) -> None:
        (grasp,) = generate_grasps(self.world, Point2(3.0, 3.5))
        self.assertTrue(wall_blocked(grasp, self.world))

    def test_open_front_never_blocks(self) -> None:
        (grasp,) = generate_grasps(self.world, Point2(3.0, 0.5))
        self.assertLess(grasp.wrist_end.y, 0.0)
        self.assertFalse(wall_blocked(grasp, self.world))


if __name__ == "__main__":
    unittest.main()
