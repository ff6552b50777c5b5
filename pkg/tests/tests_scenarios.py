#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import dirname, realpath
from unittest import TestCase

TESTS_DIR = dirname(realpath(__file__))
ROOT_DIR = dirname(TESTS_DIR)

import sys
sys.path.insert(0, ROOT_DIR)

from src.scenarios import SCENARIOS, build, list_scenarios
from src.scenarios._base_scenario import ExpectedAssertion, Provenance
from src.scenarios.checks import run_assertion, run_assertions, compare, AssertionContext
from src.scenarios.overfitting import outcome_count, competitor_kernel
from src.scenarios.team import strict_self_confirming
from src.engine.errors import ScenarioError

"""
    This file is an include file.

    It should be run from the "tests.py" entry point
    located into the current directory

    It contains the tests for the
    "src/scenarios/" directory.
"""

class RegistryTests(TestCase):

    def test_every_scenario_builds(self):

        self.assertEqual(len(list_scenarios()), len(SCENARIOS))

        for name in SCENARIOS:

            scenario = build(name)

            self.assertEqual(scenario.name, name)
            self.assertTrue(scenario.description)
            self.assertIn(scenario.initial, scenario.models)
            self.assertTrue(scenario.expected)

            for assertion in scenario.expected:
                self.assertIsInstance(assertion.provenance, Provenance)

    def test_unknown_names_and_parameters(self):

        with self.assertRaises(ScenarioError):
            build('overconfidence3')

        with self.assertRaises(ScenarioError):
            build('overconfidence1', {'effort': 2})

    def test_untagged_assertions_are_refused(self):

        with self.assertRaises(ScenarioError):
            ExpectedAssertion('derived_value', None, {'key': 'outcomes'})

class AssertionTests(TestCase):

    def check_scenario(self, name, parameters = None):

        scenario = build(name, parameters)

        context = AssertionContext(scenario)

        self.assertTrue(scenario.expected)

        for assertion in scenario.expected:

            outcome = run_assertion(context, assertion)

            self.assertTrue(outcome.passed, '%s: %s (%s)' % (name, assertion.description, outcome.detail))

    def test_overconfidence1(self):

        self.check_scenario('overconfidence1')

    def test_overconfidence2(self):

        self.check_scenario('overconfidence2')

    def test_example1(self):

        self.check_scenario('example1')

    def test_mixed_sce(self):

        self.check_scenario('mixed_sce')

    def test_overfitting(self):

        self.check_scenario('overfitting')

    def test_appendix_scenarios(self):

        self.check_scenario('appendix_c1')
        self.check_scenario('appendix_c2')

    def test_investment(self):

        self.check_scenario('investment')
        self.check_scenario('investment', {'believed_market': 3.0})

    def test_team(self):

        self.check_scenario('team')
        self.check_scenario('team', {'believed_ability': 0.3})

    def test_failures_are_reported(self):

        scenario = build('overconfidence1')
        context = AssertionContext(scenario)

        outcome = run_assertion(context, ExpectedAssertion('equilibrium_count', Provenance.DERIVED, {'kind': 'pure', 'equals': 2}))

        self.assertFalse(outcome.passed)
        self.assertEqual(outcome.observed, 1)

        # A missing argument fails the assertion instead of the run
        outcome = run_assertion(context, ExpectedAssertion('derived_value', Provenance.DERIVED, {'key': 'missing', 'equals': 0}))

        self.assertFalse(outcome.passed)
        self.assertTrue(outcome.detail.startswith('error'))

        with self.assertRaises(ScenarioError):
            run_assertion(context, ExpectedAssertion('no_such_check', Provenance.TRIVIAL))

    def test_run_assertions_keeps_order(self):

        scenario = build('appendix_c2')

        outcomes = run_assertions(scenario)

        self.assertEqual([outcome.assertion for outcome in outcomes], scenario.expected)
        self.assertTrue(all(outcome.passed for outcome in outcomes))

    def test_compare(self):

        self.assertTrue(compare(1.0, {'equals': 1.0 + 1e-12}))
        self.assertFalse(compare(1.0, {'equals': 1.1}))
        self.assertTrue(compare(1.0, {'equals': 1.1, 'tolerance': 0.2}))
        self.assertTrue(compare(0.5, {'at_least': 0.5, 'at_most': 0.6}))
        self.assertFalse(compare(None, {'at_least': 0.5}))
        self.assertTrue(compare('GloballyRobust', {'is': 'GloballyRobust'}))

class OverfittingTests(TestCase):

    def test_trigger(self):

        self.assertEqual(outcome_count(2.5), 4)
        self.assertEqual(outcome_count(3.0), 5)

        scenario = build('overfitting')

        self.assertAlmostEqual(scenario.derived['trigger'], 2.988)
        self.assertEqual(sorted(scenario.competing), ['theta_1', 'theta_2', 'theta_3', 'theta_4'])

        for mode in range(1, 5):
            self.assertAlmostEqual(sum(competitor_kernel(4, 0.001, mode)), 1.0)

    def test_invalid_parameters(self):

        with self.assertRaises(ScenarioError):
            build('overfitting', {'eta': 0.2})

        with self.assertRaises(ScenarioError):
            build('overfitting', {'cost': 0.01})

class FamilyScenarioTests(TestCase):

    def test_underconfident_team(self):

        self.assertEqual(strict_self_confirming([1.0, 2.0, 3.0], 2.0, 1.0, 2.0, 0.5), [1.0])
        self.assertEqual(strict_self_confirming([1.0, 2.0, 3.0], 0.3, 1.0, 2.0, 0.5), [])

        scenario = build('team', {'believed_ability': 0.3})

        self.assertEqual([assertion.check for assertion in scenario.expected],
            ['equilibrium_count', 'equilibrium_count', 'constrained_verdict', 'mixed_component'])
        self.assertTrue(scenario.assume_convergence)

        with self.assertRaises(ScenarioError):
            build('team', {'believed_ability': 3.0})

    def test_optimistic_investor(self):

        scenario = build('investment', {'believed_market': 3.0})

        self.assertAlmostEqual(scenario.derived['beta_low'], -0.5)
        self.assertAlmostEqual(scenario.derived['beta_high'], 2.0)
        self.assertIn('equilibrium_count', [assertion.check for assertion in scenario.expected])

        with self.assertRaises(ScenarioError):
            build('investment', {'market_range': [0.0, 0.5]})
