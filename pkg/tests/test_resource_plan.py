import unittest

from lazyshelf.errors import BudgetExceeded
from lazyshelf.resource_plan import (
    MONOTONE_SECONDS,
    NONMONOTONE_SECONDS,
    ResourceGuard,
    SolveLimits,
)


class ResourcePlanTests(unittest.TestCase):
    def test_resource_guard_stops_on_time(self) -> None:
        ticks = [100.0, 100.2]

        def fake_clock() -> float:
            return ticks.pop(0)

        limits = SolveLimits(max_seconds=0.1)
        guard = ResourceGuard(limits, clock=fake_clock)
        guard.start()

        reason = guard.checkpoint(planner_calls=0, nodes=0)
        self.assertIsNotNone(reason)
        self.assertEqual(reason.reason, "max_seconds")

    def test_guard_without_start_ignores_time(self) -> None:
        guard = ResourceGuard(SolveLimits(max_seconds=0.0))
        self.assertIsNone(guard.checkpoint())
        self.assertEqual(guard.elapsed(), 0.0)

    def test_work_limits_report_their_reason(self) -> None:
        guard = ResourceGuard(SolveLimits(max_seconds=None, max_planner_calls=5, max_nodes=3, max_perturbations=2))
        self.assertIsNone(guard.checkpoint(planner_calls=4, nodes=2, perturbations=1))
        self.assertEqual(guard.checkpoint(planner_calls=5).reason, "max_planner_calls")
        self.assertEqual(guard.checkpoint(nodes=3).reason, "max_nodes")
        self.assertEqual(guard.checkpoint(perturbations=2).reason, "max_perturbations")

    def test_enforce_raises_with_stop_reason(self) -> None:
        guard = ResourceGuard(SolveLimits(max_seconds=None, max_nodes=1))
        with self.assertRaises(BudgetExceeded) as ctx:
            guard.enforce(nodes=1)
        self.assertEqual(ctx.exception.stop_reason.reason, "max_nodes")

    def test_second_start_keeps_first_clock_reading(self) -> None:
        ticks = iter([10.0, 50.0, 10.5])
        guard = ResourceGuard(SolveLimits(max_seconds=1.0), clock=lambda: next(ticks))
        guard.start()
        guard.start()
        self.assertAlmostEqual(guard.elapsed(), 40.0)

    def test_default_budgets(self) -> None:
        self.assertEqual(SolveLimits().max_seconds, MONOTONE_SECONDS)
        self.assertEqual(MONOTONE_SECONDS, 100.0)
        self.assertEqual(NONMONOTONE_SECONDS, 240.0)


if __name__ == "__main__":
    unittest.main()
