#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import dirname, realpath
from unittest import TestCase

TESTS_DIR = dirname(realpath(__file__))
ROOT_DIR = dirname(TESTS_DIR)

import sys
sys.path.insert(0, ROOT_DIR)

from src.engine.equilibrium import Strategy, enumerate_pure_bne, enumerate_mixed_bne, find_equilibria, \
    estimate_p_absorbing, check_local_dominance, check_locally_kl_minimizing, PAbsorption
from src.engine.errors import ConfigError
from src.scenarios import build

"""
    This file is an include file.

    It should be run from the "tests.py" entry point
    located into the current directory

    It contains the tests for the
    "src/engine/equilibrium.py" file.
"""

class StrategyTests(TestCase):

    def test_strategies(self):

        strategy = Strategy.pure(3, 1)

        self.assertEqual(strategy.support, (1,))
        self.assertTrue(strategy.is_pure)
        self.assertFalse(Strategy((0.25, 0.75)).is_pure)

        with self.assertRaises(ConfigError):
            Strategy((0.5, 0.6))
        with self.assertRaises(ConfigError):
            Strategy(())

class EnumerationTests(TestCase):

    def test_unique_strict_equilibrium(self):

        scenario = build('overconfidence1')
        problem, model = scenario.problem, scenario.initial_model

        records = find_equilibria(problem, model)

        self.assertEqual(len(records), 1)

        record = records[0]

        self.assertEqual(record.support, (problem.index_of('1'),))
        self.assertEqual(record.minimizers, (model.index_of(1.0),))
        self.assertTrue(record.classified)
        self.assertTrue(record.quasi_strict)
        self.assertTrue(record.uniformly_quasi_strict)
        self.assertTrue(record.sce)
        self.assertFalse(record.knife_edge)

        # Against omega = 1, effort 1 beats efforts 0 and 2 by 0.5
        self.assertAlmostEqual(record.margin, 0.5, places = 7)

        self.assertEqual(record.describe(problem), 'pure 1 [quasi_strict, uniformly_quasi_strict, sce]')

    def test_weak_equilibrium_and_its_component(self):

        scenario = build('example1')
        problem, model = scenario.problem, scenario.initial_model

        pure = enumerate_pure_bne(problem, model)

        self.assertEqual([record.support for record in pure], [(0,)])
        self.assertEqual(pure[0].minimizers, (model.index_of(2.0),))

        records = find_equilibria(problem, model)

        record = next(record for record in records if record.strategy.is_pure)

        self.assertTrue(record.sce)
        self.assertFalse(record.quasi_strict)
        self.assertFalse(record.uniformly_quasi_strict)
        self.assertTrue(record.knife_edge)
        self.assertEqual(record.describe(problem), 'pure 1 [sce, knife_edge]')

        mixed = [record for record in records if not record.strategy.is_pure]

        self.assertEqual(len(mixed), 1)

        component = mixed[0].component

        self.assertEqual(mixed[0].support, (0, 1))
        self.assertAlmostEqual(component.interval[0], 0.75, places = 6)
        self.assertEqual(component.interval[1], 1.0)
        self.assertEqual(len(component.members), 6)
        self.assertFalse(mixed[0].sce)

    def test_every_strategy_is_an_equilibrium(self):

        scenario = build('mixed_sce')
        problem, model = scenario.problem, scenario.initial_model

        records = find_equilibria(problem, model, 10)

        self.assertEqual(sorted(record.support for record in records if record.strategy.is_pure), [(0,), (1,)])

        mixed = [record for record in records if not record.strategy.is_pure]

        self.assertEqual(len(mixed), 1)
        self.assertEqual(mixed[0].component.interval, (0.0, 1.0))
        self.assertEqual(len(mixed[0].component.members), 11)
        self.assertTrue(mixed[0].sce)
        self.assertEqual(mixed[0].minimizers, (model.index_of(1.5),))

    def test_coarse_grids_are_refused(self):

        scenario = build('example1')

        with self.assertRaises(ConfigError):
            enumerate_mixed_bne(scenario.problem, scenario.initial_model, 5)

class AbsorptionTests(TestCase):

    def test_certified_absorption(self):

        scenario = build('overconfidence1')

        record = estimate_p_absorbing(scenario.problem, scenario.initial_model, find_equilibria(scenario.problem, scenario.initial_model)[0])

        self.assertTrue(record.p_absorbing.certified)
        self.assertEqual(record.p_absorbing.route, 'uniformly-quasi-strict')
        self.assertTrue(record.p_absorbing.is_p_absorbing)

    def test_monte_carlo_absorption(self):

        scenario = build('example1')
        problem, model = scenario.problem, scenario.initial_model

        record = enumerate_pure_bne(problem, model)[0]

        record = estimate_p_absorbing(problem, model, record, eps = 0.05, paths = 50, horizon = 50, seed = 1)

        absorption = record.p_absorbing

        self.assertTrue(record.classified)
        self.assertFalse(absorption.certified)
        self.assertEqual(absorption.route, 'monte-carlo')
        self.assertEqual((absorption.paths, absorption.horizon, absorption.eps), (50, 50, 0.05))
        self.assertLessEqual(absorption.interval[0], absorption.estimate + 1e-12)
        self.assertGreaterEqual(absorption.interval[1], absorption.estimate - 1e-12)
        self.assertAlmostEqual(absorption.prior_mass, 0.975)

    def test_absorption_evidence(self):

        steady = PAbsorption(False, 'monte-carlo', 0.5, (0.45, 0.55), 0.05, 1000, 1000, 0.975, 520, 20)
        leaking = PAbsorption(False, 'monte-carlo', 0.018, (0.011, 0.028), 0.05, 1000, 1000, 0.975, 25, 7)
        empty = PAbsorption(False, 'monte-carlo', 0.0, (0.0, 0.004), 0.05, 1000, 1000, 0.975)

        self.assertTrue(steady.is_p_absorbing)
        self.assertTrue(leaking.decaying)
        self.assertFalse(leaking.is_p_absorbing)
        self.assertFalse(empty.is_p_absorbing)
        self.assertTrue(PAbsorption(certified = True).is_p_absorbing)

    def test_longer_horizons_lower_the_upper_bound(self):

        scenario = build('example1')
        problem, model = scenario.problem, scenario.initial_model

        record = enumerate_pure_bne(problem, model)[0]

        short, long = [estimate_p_absorbing(problem, model, record, eps = 0.05, paths = 1000, horizon = horizon, seed = 2,
            threads = 4).p_absorbing for horizon in (1000, 4000)]

        # Paths share their first periods across horizons, so absorption is nested
        self.assertLessEqual(long.estimate, short.estimate)
        self.assertLess(long.interval[1], short.interval[1])
        self.assertTrue(long.decaying)

class FamilyTests(TestCase):

    def equilibrium(self, family_variant):

        scenario = build('overconfidence2', {'family': family_variant})

        records = find_equilibria(scenario.problem, scenario.initial_model)

        self.assertEqual(len(records), 1)

        return scenario, records[0]

    def test_pure_equilibrium(self):

        scenario, record = self.equilibrium('ordered')

        self.assertEqual(record.support, (scenario.problem.index_of('2'),))
        self.assertEqual(record.minimizers, (scenario.initial_model.index_of((2.0, 2.0)),))
        self.assertTrue(record.uniformly_quasi_strict)
        self.assertFalse(record.sce)

    def test_dominance_on_the_ordered_half(self):

        scenario, record = self.equilibrium('ordered')

        record = check_local_dominance(scenario.problem, scenario.family, scenario.initial_model, record)

        checks = record.family_checks

        self.assertAlmostEqual(checks.eps, 0.4)
        self.assertTrue(checks.locally_dominant)
        self.assertEqual(checks.dominance_order, 1.0)
        self.assertIsNone(checks.dominance_failure)
        self.assertIsNone(checks.footnote_condition)

        record = check_locally_kl_minimizing(scenario.problem, scenario.family, scenario.initial_model, record)

        self.assertTrue(record.family_checks.locally_kl_minimizing)
        self.assertEqual(record.family_checks.kl_witnesses, [])

        # Both checks are kept on the record
        self.assertTrue(record.family_checks.locally_dominant)

    def test_failures_on_the_plane(self):

        scenario, record = self.equilibrium('plane')

        record = check_local_dominance(scenario.problem, scenario.family, scenario.initial_model, record, d_candidates = (1.0,))

        checks = record.family_checks

        self.assertFalse(checks.locally_dominant)
        self.assertEqual(checks.dominance_failure['d'], 1.0)
        self.assertGreater(checks.dominance_failure['moment'], 1.0)

        record = check_locally_kl_minimizing(scenario.problem, scenario.family, scenario.initial_model, record)

        witnesses = record.family_checks.kl_witnesses

        self.assertFalse(record.family_checks.locally_kl_minimizing)
        self.assertGreater(len(witnesses), 0)
        self.assertIn((1.8, 2.2), [witness['point'] for witness in witnesses])
        self.assertEqual(witnesses, sorted(witnesses, key = lambda witness: -witness['improvement']))
