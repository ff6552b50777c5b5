#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import dirname, realpath
from unittest import TestCase

TESTS_DIR = dirname(realpath(__file__))
ROOT_DIR = dirname(TESTS_DIR)

import sys
sys.path.insert(0, ROOT_DIR)

import numpy as np
from scipy.optimize import linprog

from src.engine.simplex import LinearProgramStatus, maximize, best_margin

"""
    This file is an include file.

    It should be run from the "tests.py" entry point
    located into the current directory

    It contains the tests for the
    "src/engine/simplex.py" file.
"""

class SimplexTests(TestCase):

    def test_against_highs(self):

        rng = np.random.default_rng(11)

        for trial in range(20):

            A_ub = rng.uniform(0.1, 1.0, (4, 3))
            b_ub = rng.uniform(1.0, 2.0, 4)
            c = rng.uniform(-0.5, 1.0, 3)

            oracle = linprog(-c, A_ub = A_ub, b_ub = b_ub, method = 'highs')
            result = maximize(c, A_ub, b_ub)

            self.assertEqual(result.status, LinearProgramStatus.optimal)
            self.assertAlmostEqual(result.objective, -oracle.fun, places = 8)
            self.assertTrue((A_ub @ result.x <= b_ub + 1e-9).all())
            self.assertTrue((result.x >= -1e-12).all())

            A_eq, b_eq = np.ones((1, 3)), np.array([1.0])

            oracle = linprog(-c, A_ub = A_ub, b_ub = b_ub, A_eq = A_eq, b_eq = b_eq, method = 'highs')
            result = maximize(c, A_ub, b_ub, A_eq, b_eq)

            self.assertAlmostEqual(result.objective, -oracle.fun, places = 8)
            self.assertAlmostEqual(result.x.sum(), 1.0, places = 9)

    def test_negative_right_hand_sides(self):

        # x0 + x1 >= 1, written as -x0 - x1 <= -1, and x0 <= 3
        result = maximize([-1.0, -2.0], [[-1.0, -1.0], [1.0, 0.0]], [-1.0, 3.0])

        self.assertEqual(result.status, LinearProgramStatus.optimal)
        self.assertAlmostEqual(result.objective, -1.0)
        np.testing.assert_allclose(result.x, [1.0, 0.0], atol = 1e-12)

    def test_infeasible_and_unbounded(self):

        self.assertEqual(maximize([1.0, 1.0], [[1.0, 1.0]], [-1.0]).status, LinearProgramStatus.infeasible)
        self.assertEqual(maximize([1.0, 1.0], A_eq = [[1.0, 1.0], [1.0, 1.0]], b_eq = [1.0, 2.0]).status, LinearProgramStatus.infeasible)

        self.assertEqual(maximize([1.0, 0.0], [[1.0, -1.0]], [1.0]).status, LinearProgramStatus.unbounded)

    def test_redundant_equalities(self):

        result = maximize([1.0, 2.0], A_eq = [[1.0, 1.0], [2.0, 2.0]], b_eq = [1.0, 2.0])

        self.assertEqual(result.status, LinearProgramStatus.optimal)
        self.assertAlmostEqual(result.objective, 2.0)

class MarginTests(TestCase):

    def test_margins(self):

        result = best_margin([[1.0, -1.0], [-1.0, 1.0]])

        self.assertTrue(result.feasible)
        self.assertAlmostEqual(result.margin, 0.0)
        np.testing.assert_allclose(result.belief, [0.5, 0.5], atol = 1e-9)

        result = best_margin([[1.0, 2.0]])

        self.assertAlmostEqual(result.margin, 2.0)
        np.testing.assert_allclose(result.belief, [0.0, 1.0], atol = 1e-9)

        result = best_margin([[-1.0, -3.0], [-2.0, -0.5]])

        self.assertLess(result.margin, 0)

    def test_equality_rows(self):

        result = best_margin([[1.0, 2.0]], [[1.0, -1.0]])

        self.assertTrue(result.feasible)
        self.assertAlmostEqual(result.margin, 1.5, places = 7)

        self.assertFalse(best_margin([[1.0, 2.0]], [[1.0, 1.0]]).feasible)

    def test_no_constraint(self):

        result = best_margin(np.zeros((0, 3)))

        self.assertTrue(result.feasible)
        self.assertAlmostEqual(result.margin, 1.0)
        self.assertAlmostEqual(result.belief.sum(), 1.0)
