import json
import tempfile
import unittest
from pathlib import Path

from lazyshelf.core.geometry import Point2
from lazyshelf.errors import IOFailure, ParseError
from lazyshelf.sample_scenes import default_world, swap_scene
from lazyshelf.storage.instances import (
    DEFAULT_WORLD_PATH,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    load_world,
    read_json,
    save_instance,
    world_from_dict,
    world_to_dict,
)

from . import TWO_OBJECTS


class StorageTests(unittest.TestCase):
    def test_bundled_world_matches_desk_defaults(self) -> None:
        self.assertTrue(DEFAULT_WORLD_PATH.exists())
        world = load_world()
        self.assertEqual(world.workspace.max, Point2(10.0, 6.0))
        self.assertEqual(world.object_radius, 0.5)
        self.assertEqual(world.grasp_count, 3)
        self.assertEqual(world, default_world())

    def test_instance_file_round_trip(self) -> None:
        instance = swap_scene()
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "nested" / "swap.json"
            save_instance(instance, path)
            loaded = load_instance(path)
        self.assertEqual(loaded, instance)

    def test_missing_id_falls_back_to_file_stem(self) -> None:
        payload = instance_to_dict(swap_scene())
        del payload["id"]
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "mine.json"
            path.write_text(json.dumps(payload), encoding="utf-8")
            self.assertEqual(load_instance(path).instance_id, "mine")

    def test_fixture_instance_loads(self) -> None:
        instance = load_instance(TWO_OBJECTS)
        self.assertEqual(instance.instance_id, "two-objects")
        self.assertEqual(instance.objects, ("o1", "o2"))
        self.assertEqual(instance.world, default_world())

    def test_missing_key_names_the_field(self) -> None:
        payload = world_to_dict(default_world())
        del payload["object_radius"]
        with self.assertRaises(ParseError) as ctx:
            world_from_dict(payload)
        self.assertEqual(ctx.exception.field, "world.object_radius")

    def test_non_numeric_radius_is_rejected(self) -> None:
        payload = world_to_dict(default_world())
        payload["gripper_radius"] = "wide"
        with self.assertRaises(ParseError):
            world_from_dict(payload)

    def test_invalid_world_values_become_parse_errors(self) -> None:
        payload = world_to_dict(default_world())
        payload["object_radius"] = -1.0
        with self.assertRaises(ParseError):
            world_from_dict(payload)

    def test_start_must_place_every_object(self) -> None:
        payload = instance_to_dict(swap_scene())
        del payload["start"]["o2"]
        with self.assertRaises(ParseError) as ctx:
            instance_from_dict(payload)
        self.assertEqual(ctx.exception.field, "start")

    def test_unknown_object_in_goal_is_rejected(self) -> None:
        payload = instance_to_dict(swap_scene())
        payload["goal"]["o9"] = [1.0, 1.0]
        with self.assertRaises(ParseError):
            instance_from_dict(payload)

    def test_malformed_json_reports_line(self) -> None:
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "broken.json"
            path.write_text('{\n  "world": ,\n}', encoding="utf-8")
            with self.assertRaises(ParseError) as ctx:
                read_json(path)
        self.assertEqual(ctx.exception.line, 2)

    def test_missing_file_is_an_io_failure(self) -> None:
        with tempfile.TemporaryDirectory() as temp_dir:
            with self.assertRaises(IOFailure):
                load_instance(Path(temp_dir) / "absent.json")


if __name__ == "__main__":
    unittest.main()
