import unittest
from unittest import mock

from lazyshelf.core.geometry import Point2, Rect
from lazyshelf.core.models import Arrangement, Instance, WorldSpec
from lazyshelf.core.world import (
    StateCodec,
    apply_move,
    build_grid,
    check_arrangement,
    free_positions,
    placement_collides,
    sample_instance,
    validate_instance,
)
from lazyshelf.errors import (
    EmptyGrid,
    OutOfWorkspace,
    PlacementCollision,
    RearrangementError,
    SamplingExhausted,
)
from lazyshelf.sample_scenes import default_world, free_scene


def _world(width: float, height: float, resolution: float = 1.0) -> WorldSpec:
    return WorldSpec(
        workspace=Rect(Point2(0.0, 0.0), Point2(width, height)),
        object_radius=0.5,
        gripper_radius=0.3,
        wrist_length=1.0,
        grid_resolution=resolution,
    )


class GridTests(unittest.TestCase):
    def test_default_world_grid_is_row_major_from_front_left(self) -> None:
        grid = build_grid(default_world())
        self.assertEqual(len(grid), 40)
        self.assertEqual(grid[0], Point2(0.5, 0.5))
        self.assertEqual(grid[1], Point2(1.75, 0.5))
        self.assertEqual(grid[8], Point2(0.5, 1.75))
        self.assertEqual(grid[len(grid) - 1], Point2(9.25, 5.5))
        self.assertEqual(grid.index_of(Point2(3.0, 4.25)), 26)

    def test_every_grid_position_fits_the_workspace(self) -> None:
        world = default_world()
        for position in build_grid(world):
            self.assertFalse(placement_collides(Arrangement(()), "o1", position, world))

    def test_workspace_smaller_than_an_object_has_no_grid(self) -> None:
        with self.assertRaises(EmptyGrid):
            build_grid(_world(0.8, 3.0))

    def test_exact_fit_gives_single_position(self) -> None:
        grid = build_grid(_world(1.0, 1.0))
        self.assertEqual(list(grid), [Point2(0.5, 0.5)])


class MoveTests(unittest.TestCase):
    def setUp(self) -> None:
        self.world = _world(6.0, 4.0)
        self.arrangement = Arrangement.of({"o1": Point2(1.0, 1.0), "o2": Point2(3.0, 1.0)})

    def test_apply_move_leaves_input_untouched(self) -> None:
        moved = apply_move(self.arrangement, "o1", Point2(1.0, 3.0), self.world)
        self.assertEqual(moved["o1"], Point2(1.0, 3.0))
        self.assertEqual(self.arrangement["o1"], Point2(1.0, 1.0))
        self.assertEqual(moved["o2"], self.arrangement["o2"])

    def test_apply_move_rejects_overlap(self) -> None:
        with self.assertRaises(PlacementCollision):
            apply_move(self.arrangement, "o1", Point2(2.5, 1.0), self.world)

    def test_apply_move_rejects_leaving_workspace(self) -> None:
        with self.assertRaises(OutOfWorkspace):
            apply_move(self.arrangement, "o1", Point2(0.2, 1.0), self.world)

    def test_apply_move_to_same_spot_returns_equal_arrangement(self) -> None:
        self.assertEqual(apply_move(self.arrangement, "o1", Point2(1.0, 1.0), self.world), self.arrangement)

    def test_touching_placement_is_free(self) -> None:
        self.assertFalse(placement_collides(self.arrangement, "o1", Point2(2.0, 1.0), self.world))

    def test_free_positions_skip_current_and_blocked_slots(self) -> None:
        grid = build_grid(self.world)
        slots = free_positions(self.arrangement, "o1", grid, self.world)
        self.assertNotIn(Point2(2.5, 0.5), slots)
        self.assertNotIn(Point2(1.0, 1.0), slots)
        self.assertNotIn(Point2(3.5, 1.5), slots)
        self.assertIn(Point2(0.5, 3.5), slots)
        for slot in slots:
            self.assertFalse(placement_collides(self.arrangement, "o1", slot, self.world))

    def test_check_arrangement_reports_overlap(self) -> None:
        overlapping = self.arrangement.moved("o2", Point2(1.5, 1.0))
        with self.assertRaises(PlacementCollision):
            check_arrangement(overlapping, self.world)


class SamplingTests(unittest.TestCase):
    def test_sampling_is_deterministic(self) -> None:
        world = default_world()
        self.assertEqual(sample_instance(world, 5, 42), sample_instance(world, 5, 42))
        self.assertNotEqual(sample_instance(world, 5, 42), sample_instance(world, 5, 43))

    def test_sampled_instances_are_valid(self) -> None:
        world = default_world()
        grid = build_grid(world)
        for seed in range(10):
            instance = sample_instance(world, 6, seed)
            validate_instance(instance)
            self.assertEqual(instance.objects, ("o1", "o2", "o3", "o4", "o5", "o6"))
            self.assertEqual(instance.instance_id, f"n6-s{seed}")
            for obj in instance.objects:
                self.assertIsNotNone(grid.index_of(instance.goal[obj]))

    def test_sampling_more_objects_than_slots_fails(self) -> None:
        with self.assertRaises(ValueError):
            sample_instance(default_world(), 41, 0)

    def test_sampling_gives_up_when_starts_cannot_fit(self) -> None:
        world = _world(2.0, 1.0, resolution=0.5)
        self.assertEqual(len(build_grid(world)), 3)
        with self.assertRaises(SamplingExhausted):
            sample_instance(world, 3, 0)

    def test_goals_keep_clear_on_a_grid_finer_than_an_object(self) -> None:
        world = _world(4.0, 4.0, resolution=0.6)
        for seed in range(20):
            instance = sample_instance(world, 4, seed)
            validate_instance(instance)
            goals = [instance.goal[obj] for obj in instance.objects]
            for index, goal in enumerate(goals):
                for other in goals[index + 1 :]:
                    self.assertGreaterEqual(goal.distance_to(other), 2 * world.object_radius)

    def test_sampling_gives_up_when_goals_cannot_be_separated(self) -> None:
        with mock.patch("lazyshelf.core.world._clear_of_each_other", return_value=False):
            with self.assertRaises(SamplingExhausted) as ctx:
                sample_instance(default_world(), 3, 0)
        self.assertIn("goal slots", str(ctx.exception))


class CodecTests(unittest.TestCase):
    def test_keys_name_start_and_grid_slots(self) -> None:
        instance = free_scene(2)
        grid = build_grid(instance.world)
        codec = StateCodec(instance, grid)
        self.assertEqual(codec.key(instance.start), ("S", "S"))
        goal_slots = tuple(f"P{grid.index_of(instance.goal[obj])}" for obj in instance.objects)
        self.assertEqual(codec.key(instance.goal), goal_slots)

    def test_off_grid_non_start_position_raises(self) -> None:
        instance = free_scene(1)
        codec = StateCodec(instance)
        with self.assertRaises(RearrangementError):
            codec.key(instance.start.moved("o1", Point2(5.55, 5.55)))


class InstanceValidationTests(unittest.TestCase):
    def test_validate_rejects_goal_off_grid(self) -> None:
        instance = free_scene(1)
        shifted = Instance(
            world=instance.world,
            objects=instance.objects,
            start=instance.start,
            goal=Arrangement.of({"o1": Point2(4.0, 4.0)}),
        )
        with self.assertRaises(RearrangementError):
            validate_instance(shifted)

    def test_local_task_swaps_start_only(self) -> None:
        instance = free_scene(2)
        moved = instance.start.moved("o1", instance.goal["o1"])
        task = instance.with_start(moved)
        self.assertEqual(task.start, moved)
        self.assertEqual(task.goal, instance.goal)
        self.assertEqual(task.not_at_goal(moved), ["o2"])
