#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import dirname, realpath
from unittest import TestCase

TESTS_DIR = dirname(realpath(__file__))
ROOT_DIR = dirname(TESTS_DIR)

import sys
sys.path.insert(0, ROOT_DIR)

import numpy as np

from src.engine.env import Categorical, DecisionProblem, TableUtility
from src.engine.model import SubjectiveModel, Belief
from src.engine.policy import PolicyKind, PolicyMode, SimplexGrid, compositions, payoff_table, expected_payoffs, \
    myopic_best_set, solve_policy, action_optimal_on_face, best_response_margin, action_somewhere_optimal, \
    somewhere_optimal_on_grid
from src.engine.errors import PolicyError
from src.scenarios import build

"""
    This file is an include file.

    It should be run from the "tests.py" entry point
    located into the current directory

    It contains the tests for the
    "src/engine/policy.py" file.
"""

"""
    A two-armed bandit over a binary outcome: the safe arm pays 0.55
    whatever happens and teaches nothing, the risky arm pays the outcome
    and reveals whether the agent lives in the good or in the bad world.
"""

def bandit(discount = 0.9):

    problem = DecisionProblem((0.0, 1.0), (Categorical((0.5, 0.5)), Categorical((0.9, 0.1))),
        TableUtility(((0.55, 0.55), (0.0, 1.0))), discount, ('safe', 'risky'))

    model = SubjectiveModel('worlds', ((1.0,), (0.0,)), (
        (Categorical((0.5, 0.5)), Categorical((0.5, 0.5))),
        (Categorical((0.1, 0.9)), Categorical((0.9, 0.1)))
    ))

    return problem, model

class PayoffTests(TestCase):

    def test_payoff_table(self):

        problem, model = bandit()

        np.testing.assert_allclose(payoff_table(problem, model), [[0.55, 0.9], [0.55, 0.1]], atol = 1e-12)
        np.testing.assert_allclose(expected_payoffs(problem, model, [0.45, 0.55]), [0.55, 0.46], atol = 1e-12)

        self.assertEqual(myopic_best_set(problem, model, Belief(model.id, (0.45, 0.55))), (0,))
        self.assertEqual(myopic_best_set(problem, model, [0.5625, 0.4375]), (0, 1))

    def test_faces(self):

        problem, model = bandit()

        self.assertTrue(action_optimal_on_face(problem, model, 1, [0]))
        self.assertFalse(action_optimal_on_face(problem, model, 1, [0, 1]))
        self.assertTrue(action_optimal_on_face(problem, model, 0, [1]))

        self.assertTrue(action_somewhere_optimal(problem, model, 1, [0, 1]))
        self.assertFalse(action_somewhere_optimal(problem, model, 0, [0]))
        self.assertTrue(somewhere_optimal_on_grid(problem, model, 1, [0, 1]))
        self.assertFalse(somewhere_optimal_on_grid(problem, model, 1, [1]))

    def test_margins(self):

        problem, model = bandit()

        result = best_response_margin(problem, model, 1, [0, 1])

        self.assertAlmostEqual(result.margin, 0.35)
        np.testing.assert_allclose(result.belief, [1.0, 0.0], atol = 1e-9)

        # Indifference between the two arms pins the belief
        result = best_response_margin(problem, model, 0, [0, 1], required = [1])

        self.assertTrue(result.feasible)
        self.assertEqual(result.margin, float('inf'))
        np.testing.assert_allclose(result.belief, [0.5625, 0.4375], atol = 1e-6)

class GridTests(TestCase):

    def test_compositions(self):

        self.assertEqual(list(compositions(2, 2)), [(2, 0), (1, 1), (0, 2)])
        self.assertEqual(len(list(compositions(4, 3))), 15)

    def test_grid(self):

        grid = SimplexGrid(3, 5)

        self.assertEqual(len(grid), 15)
        np.testing.assert_allclose(grid.beliefs.sum(axis = 1), 1.0)

        np.testing.assert_array_equal(grid.index(grid.counts), np.arange(len(grid)))

        with self.assertRaises(PolicyError):
            SimplexGrid(3, 1)

    def test_linear_functions_interpolate_exactly(self):

        rng = np.random.default_rng(5)

        for parts in (2, 3, 4):

            grid = SimplexGrid(parts, 6)
            slopes = rng.normal(size = parts)

            beliefs = rng.dirichlet(np.ones(parts), 100)

            np.testing.assert_allclose(grid.interpolate(grid.beliefs @ slopes, beliefs), beliefs @ slopes, atol = 1e-10)

            vertices, weights = grid.interpolation(beliefs)

            self.assertTrue((weights >= -1e-12).all())
            np.testing.assert_allclose(weights.sum(axis = 1), 1.0)

            # Barycentric weights reproduce the belief itself
            np.testing.assert_allclose((grid.beliefs[vertices] * weights[:, :, None]).sum(axis = 1), beliefs, atol = 1e-10)

    def test_grid_points_interpolate_to_themselves(self):

        grid = SimplexGrid(3, 4)
        values = np.arange(len(grid), dtype = float) ** 2

        np.testing.assert_allclose(grid.interpolate(values, grid.beliefs), values, atol = 1e-10)

class PolicyTests(TestCase):

    def test_myopic_policy(self):

        problem, model = bandit()

        policy = solve_policy(problem, model)

        self.assertEqual(policy.act(Belief(model.id, (0.45, 0.55))), 0)
        self.assertEqual(policy.act([0.7, 0.3]), 1)

        # Exact ties go to the lowest index
        self.assertEqual(policy.act([0.5625, 0.4375]), 0)

        np.testing.assert_array_equal(policy.act_batch(np.array([[1.0, 0.0], [0.0, 1.0]])), [1, 0])

    def test_experimentation_pays_under_discounting(self):

        problem, model = bandit(0.9)

        policy = solve_policy(problem, model, PolicyMode(PolicyKind.grid_dp, 41))

        self.assertEqual(policy.act([0.45, 0.55]), 1)
        self.assertEqual(policy.act([0.0, 1.0]), 0)
        self.assertEqual(policy.act([1.0, 0.0]), 1)

        self.assertLess(policy.residual, 1e-8)
        self.assertGreater(policy.sweeps, 1)

        # Playing safe forever is worth 0.55 / (1 - 0.9)
        self.assertAlmostEqual(policy.value([0.0, 1.0]), 5.5, places = 5)
        self.assertAlmostEqual(policy.value([1.0, 0.0]), 9.0, places = 5)
        self.assertGreater(policy.value([0.45, 0.55]), 5.5)

        # The discount of the mode overrides the one of the problem
        myopic_like = solve_policy(problem, model, PolicyMode(PolicyKind.grid_dp, 41, 0.0))
        self.assertEqual(myopic_like.act([0.45, 0.55]), 0)

    def test_invalid_modes(self):

        problem, model = bandit()

        with self.assertRaises(PolicyError):
            solve_policy(problem, model, PolicyMode(PolicyKind.grid_dp, 1))
        with self.assertRaises(PolicyError):
            solve_policy(problem, model, PolicyMode(PolicyKind.grid_dp, 11, 1.0))

    def test_vanishing_masses_keep_their_sign(self):

        scenario = build('example1')

        problem, model = scenario.problem, scenario.models['theta']

        policy = solve_policy(problem, model)

        # Effort 3 is preferred iff omega = 1 outweighs omega = 3, omega = 2 being indifferent
        np.testing.assert_array_equal(policy.act_log_batch(np.array([[-800.0, 0.0, -801.0], [-801.0, 0.0, -800.0]])), [1, 0])

        self.assertEqual(policy.act([np.exp(-30), 1 - np.exp(-30) - np.exp(-31), np.exp(-31)]), 1)

        self.assertEqual(myopic_best_set(problem, model, [2e-12, 1 - 3e-12, 1e-12]), (1,))
        self.assertEqual(myopic_best_set(problem, model, [1e-12, 1 - 3e-12, 2e-12]), (0,))
        self.assertEqual(myopic_best_set(problem, model, [0.0, 1.0, 0.0]), (0, 1))

    def test_affine_utilities_keep_the_best_set(self):

        problem, model = bandit()

        scaled = DecisionProblem(problem.actions, problem.true_dgp,
            TableUtility(tuple(tuple(3 * value - 2 for value in row) for row in ((0.55, 0.55), (0.0, 1.0)))),
            problem.discount, problem.action_names)

        for p in list(np.linspace(0, 1, 41)) + [0.5625]:

            belief = [p, 1 - p]

            self.assertEqual(myopic_best_set(problem, model, belief), myopic_best_set(scaled, model, belief), p)

        self.assertEqual(myopic_best_set(scaled, model, [0.5625, 0.4375]), (0, 1))
