import unittest

import pytest

from lazyshelf.config import PlannerConfig
from lazyshelf.core.world import sample_instance
from lazyshelf.engine import solve_instance
from lazyshelf.monotone import SOLVERS, SolveContext, get_solver, solve_cirs, solve_dfsdp, solve_mrs
from lazyshelf.plan import replay_plan
from lazyshelf.sample_scenes import default_world, free_scene, swap_scene, walled_goal_scene

from .scripted import ScriptedVerifier, placed

MONOTONE_SOLVERS = ("mrs", "dfsdp", "cirs", "lrs")


def _late_third_move_fails(instance):
    def rule(parent, obj, child):
        return not (obj == "o3" and parent != instance.start)

    return rule


class EagerSolverTests(unittest.TestCase):
    def setUp(self) -> None:
        self.instance = free_scene(3)

    def test_dfsdp_expands_each_state_once(self) -> None:
        verifier = ScriptedVerifier(self.instance, _late_third_move_fails(self.instance), cache=False)
        outcome = solve_dfsdp(self.instance.start, self.instance, SolveContext(self.instance, verifier=verifier))
        self.assertTrue(outcome.solved)
        self.assertEqual([node.moved_object for node in outcome.solution_branch[1:]], ["o3", "o1", "o2"])
        self.assertEqual(verifier.count(placed(self.instance, "o1", "o2"), "o3"), 1)
        self.assertEqual(outcome.counters.planner_calls, 9)

    def test_mrs_repeats_work_across_orderings(self) -> None:
        verifier = ScriptedVerifier(self.instance, _late_third_move_fails(self.instance), cache=False)
        outcome = solve_mrs(self.instance.start, self.instance, SolveContext(self.instance, verifier=verifier))
        self.assertTrue(outcome.solved)
        self.assertEqual(verifier.count(placed(self.instance, "o1", "o2"), "o3"), 2)
        self.assertEqual(outcome.counters.planner_calls, 11)

    def test_cirs_matches_dfsdp_without_constraints(self) -> None:
        verifier = ScriptedVerifier(self.instance, _late_third_move_fails(self.instance), cache=False)
        outcome = solve_cirs(self.instance.start, self.instance, SolveContext(self.instance, verifier=verifier))
        self.assertTrue(outcome.solved)
        self.assertEqual(outcome.counters.planner_calls, 9)
        self.assertEqual(outcome.counters.forward_check_rejections, 0)

    def test_cirs_prunes_with_constraints(self) -> None:
        instance = swap_scene()
        verifier = ScriptedVerifier(instance)
        outcome = solve_cirs(instance.start, instance, SolveContext(instance, verifier=verifier))
        self.assertFalse(outcome.solved)
        self.assertEqual(outcome.counters.planner_calls, 0)
        self.assertEqual(outcome.counters.forward_check_rejections, 2)

    def test_every_edge_of_an_eager_tree_is_verified(self) -> None:
        verifier = ScriptedVerifier(self.instance, _late_third_move_fails(self.instance))
        outcome = solve_dfsdp(self.instance.start, self.instance, SolveContext(self.instance, verifier=verifier))
        self.assertTrue(all(outcome.tree.is_accessible(node) for node in outcome.tree))

    def test_start_at_goal_is_solved_immediately(self) -> None:
        verifier = ScriptedVerifier(self.instance)
        for solver in (solve_mrs, solve_dfsdp, solve_cirs):
            outcome = solver(self.instance.goal, self.instance, SolveContext(self.instance, verifier=verifier))
            self.assertTrue(outcome.solved)
            self.assertEqual(len(outcome.solution_branch), 1)
        self.assertEqual(verifier.stats.planner_calls, 0)


class RegistryTests(unittest.TestCase):
    def test_registry_names(self) -> None:
        self.assertEqual(set(SOLVERS), set(MONOTONE_SOLVERS))
        self.assertIs(get_solver("cirs"), solve_cirs)
        with self.assertRaises(ValueError):
            get_solver("astar")


class GeometrySolverTests(unittest.TestCase):
    def test_free_scene_is_solved_by_every_solver_with_one_call_per_edge(self) -> None:
        instance = free_scene(3)
        for solver in MONOTONE_SOLVERS:
            report = solve_instance(instance, solver=solver)
            self.assertTrue(report.solved, solver)
            self.assertEqual(len(report.plan), 3)
            self.assertEqual(report.counters["planner_calls"], 3, solver)
            self.assertEqual(report.buffers_used, 0)
            self.assertTrue(replay_plan(report.plan, instance).valid, solver)

    def test_swap_scene_is_not_monotone(self) -> None:
        instance = swap_scene()
        calls = {}
        for solver in MONOTONE_SOLVERS:
            report = solve_instance(instance, solver=solver)
            self.assertFalse(report.solved, solver)
            self.assertIsNone(report.plan)
            calls[solver] = report.counters["planner_calls"]
        self.assertEqual(calls["lrs"], 0)
        self.assertLessEqual(calls["lrs"], calls["cirs"])
        self.assertLessEqual(calls["cirs"], calls["dfsdp"])
        self.assertLessEqual(calls["dfsdp"], calls["mrs"])

    def test_unmovable_object_is_unsolvable(self) -> None:
        instance = walled_goal_scene()
        for solver in MONOTONE_SOLVERS:
            self.assertFalse(solve_instance(instance, solver=solver).solved, solver)

    def test_random_expansion_order_and_roadmap_planner(self) -> None:
        instance = free_scene(3)
        config = PlannerConfig(expansion_order="random", expansion_seed=5, planner="roadmap", roadmap_samples=800)
        report = solve_instance(instance, solver="lrs", config=config)
        self.assertTrue(report.solved)
        self.assertTrue(replay_plan(report.plan, instance).valid)


def _agreement(case: unittest.TestCase, instances) -> list:
    """Checks verdict agreement and plan replay; returns per-solver planner calls of solved instances."""

    solved_calls = []
    for instance in instances:
        verdicts = {}
        calls = {}
        for solver in MONOTONE_SOLVERS:
            report = solve_instance(instance, solver=solver)
            case.assertIsNone(report.stop_reason, (instance.instance_id, solver))
            counters = report.counters
            case.assertEqual(counters["planner_calls"], counters["edges_verified"] + counters["edges_rejected"])
            verdicts[solver] = report.solved
            calls[solver] = counters["planner_calls"]
            if report.solved:
                replay = replay_plan(report.plan, instance)
                case.assertTrue(replay.valid, (instance.instance_id, solver, replay.problems))
                case.assertGreaterEqual(counters["edges_verified"], len(report.plan))
        case.assertEqual(len(set(verdicts.values())), 1, (instance.instance_id, verdicts))
        case.assertTrue(calls["cirs"] <= calls["dfsdp"] <= calls["mrs"], (instance.instance_id, calls))
        if verdicts["lrs"]:
            solved_calls.append(calls)
    return solved_calls


class AgreementTests(unittest.TestCase):
    def test_solvers_agree_on_small_sampled_instances(self) -> None:
        world = default_world()
        _agreement(self, (sample_instance(world, n, seed) for n in (2, 3) for seed in range(6)))

    @pytest.mark.slow
    def test_solvers_agree_on_two_hundred_sampled_instances(self) -> None:
        world = default_world()
        solved = _agreement(
            self, (sample_instance(world, n, 1000 * n + seed) for n in (2, 3, 4, 5) for seed in range(50))
        )
        self.assertTrue(solved)
        means = {solver: sum(calls[solver] for calls in solved) / len(solved) for solver in MONOTONE_SOLVERS}
        self.assertTrue(means["lrs"] <= means["cirs"] <= means["dfsdp"] <= means["mrs"], means)
