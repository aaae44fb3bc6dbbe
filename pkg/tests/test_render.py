from pathlib import Path
import re
import tempfile
import unittest

from lazyshelf.bench.render import render_svg
from lazyshelf.engine import solve_instance
from lazyshelf.errors import IOFailure
from lazyshelf.plan import Plan
from lazyshelf.sample_scenes import free_scene, swap_scene
from lazyshelf.resource_plan import SolveLimits


class RenderTests(unittest.TestCase):
    def setUp(self) -> None:
        self.instance = free_scene(3)

    def test_scene_only(self) -> None:
        svg = render_svg(self.instance)
        self.assertTrue(svg.startswith("<svg"))
        self.assertEqual(svg.count('class="start"'), 3)
        self.assertEqual(svg.count('class="goal"'), 3)
        self.assertNotIn('class="action', svg)
        self.assertIn("<title>free-3</title>", svg)

    def test_plan_actions_are_numbered_in_order(self) -> None:
        report = solve_instance(self.instance)
        svg = render_svg(self.instance, report.plan)
        steps = [int(step) for step in re.findall(r'data-step="(\d+)"', svg)]
        self.assertEqual(steps, list(range(1, len(report.plan) + 1)))
        self.assertEqual(svg.count('class="transfer"'), len(report.plan))
        objects = re.findall(r'data-object="([^"]+)"', svg)
        self.assertEqual(objects, [action.object for action in report.plan.actions])

    def test_buffer_moves_are_marked(self) -> None:
        instance = swap_scene()
        report = solve_instance(
            instance, policy="hybrid", limits=SolveLimits(max_seconds=60.0, max_perturbations=200)
        )
        self.assertTrue(report.solved)
        svg = render_svg(instance, report.plan)
        self.assertEqual(svg.count('class="action buffer"'), report.buffers_used)

    def test_empty_plan_matches_scene_only(self) -> None:
        self.assertEqual(render_svg(self.instance, Plan(())), render_svg(self.instance))

    def test_writes_file(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "figures" / "scene.svg"
            svg = render_svg(self.instance, path=path)
            self.assertEqual(path.read_text(encoding="utf-8"), svg)

    def test_unwritable_target(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            blocker = Path(tmpdir) / "file.txt"
            blocker.write_text("x", encoding="utf-8")
            with self.assertRaises(IOFailure):
                render_svg(self.instance, path=blocker / "scene.svg")


if __name__ == "__main__":
    unittest.main()
