#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import dirname, realpath
from unittest import TestCase

TESTS_DIR = dirname(realpath(__file__))
ROOT_DIR = dirname(TESTS_DIR)

import sys
sys.path.insert(0, ROOT_DIR)

from src.engine.robustness import VerdictKind, Certainty, MonteCarloBudget, Verdict, correct_parameters, global_verdict, \
    local_verdict, prior_mass_gate, adversary_switch_fraction, adversary_sensitivity, kl_witness_adversary, \
    constrained_verdict, multi_model_gate
from src.engine.equilibrium import find_equilibria
from src.engine.model import Belief
from src.engine.errors import ConfigError
from src.scenarios import build

"""
    This file is an include file.

    It should be run from the "tests.py" entry point
    located into the current directory

    It contains the tests for the
    "src/engine/robustness.py" file.
"""

SMALL_BUDGET = MonteCarloBudget(paths = 100, horizon = 60, seed = 4)

class GlobalVerdictTests(TestCase):

    def test_correct_specification(self):

        scenario = build('mixed_sce')

        self.assertEqual(correct_parameters(scenario.problem, scenario.initial_model), [1])

        verdict = global_verdict(scenario.problem, scenario.initial_model)

        self.assertEqual(verdict.kind, VerdictKind.GloballyRobust)
        self.assertEqual(verdict.basis, ['correct-specification'])
        self.assertEqual(verdict.certainty, Certainty.certified)
        self.assertEqual(verdict.witnesses, [{'parameter': [1.5]}])

    def test_uniformly_strict_sce(self):

        scenario = build('overconfidence1')

        self.assertEqual(correct_parameters(scenario.problem, scenario.initial_model), [])

        verdict = global_verdict(scenario.problem, scenario.initial_model)

        self.assertEqual(verdict.kind, VerdictKind.GloballyRobust)
        self.assertEqual(verdict.basis, ['uniformly-quasi-strict-sce'])
        self.assertEqual(verdict.certainty, Certainty.certified)
        self.assertEqual(verdict.witnesses[0]['minimizers'], [[1.0]])
        self.assertTrue(verdict.equilibria[0].p_absorbing.certified)

        verdict = local_verdict(scenario.problem, scenario.initial_model)

        self.assertEqual(verdict.kind, VerdictKind.LocallyRobust)
        self.assertEqual(verdict.basis, ['unconstrained-local-equals-global', 'uniformly-quasi-strict-sce'])

    def test_no_sce(self):

        scenario = build('overconfidence2')

        verdict = global_verdict(scenario.problem, scenario.initial_model)

        self.assertEqual(verdict.kind, VerdictKind.NotGloballyRobust)
        self.assertEqual(verdict.basis, ['sce-necessity'])
        self.assertEqual(verdict.adversary['eps'], 0.5)
        self.assertEqual(len(verdict.equilibria), 1)

        self.assertEqual(local_verdict(scenario.problem, scenario.initial_model).kind, VerdictKind.NotLocallyRobust)

    def test_sce_left_at_a_decaying_rate(self):

        scenario = build('example1')

        verdict = global_verdict(scenario.problem, scenario.initial_model, MonteCarloBudget(paths = 1000, horizon = 1000, seed = 0))

        # Effort 3 keeps being played again, so the share of absorbed paths only
        # shrinks slowly with the horizon
        self.assertEqual(verdict.kind, VerdictKind.Inconclusive)
        self.assertEqual(verdict.basis, ['no-certificate'])

        absorption = [record.p_absorbing for record in verdict.equilibria if record.p_absorbing is not None][0]

        self.assertGreater(absorption.interval[0], 0)
        self.assertTrue(absorption.decaying)
        self.assertFalse(absorption.is_p_absorbing)
        self.assertAlmostEqual(absorption.prior_mass, 0.975)

        summary = verdict.monte_carlo[0]

        self.assertEqual(summary['late_exits'], absorption.late_exits)
        self.assertAlmostEqual(summary['prior_mass'], 0.975)

    def test_verdicts_cite_rules(self):

        with self.assertRaises(ValueError):
            Verdict(VerdictKind.Inconclusive, [], Certainty.undetermined)

class GateTests(TestCase):

    def setUp(self):

        self.scenario = build('overconfidence1')
        self.records = find_equilibria(self.scenario.problem, self.scenario.initial_model)

    def gate(self, prior, alpha = 2.0, eps = 1e-4):

        return prior_mass_gate(self.scenario.problem, self.scenario.initial_model, Belief('theta', prior), alpha, self.records, eps)

    def test_prior_mass_gate(self):

        gate = self.gate((0.4, 0.3, 0.3))

        self.assertFalse(gate.passes)
        self.assertAlmostEqual(gate.mass, 0.4)
        self.assertEqual(gate.bound, 0.5)
        self.assertEqual(gate.union, (0,))

        self.assertTrue(self.gate((0.98, 0.01, 0.01)).passes)
        self.assertTrue(self.gate((0.4, 0.3, 0.3), alpha = 3.0).passes)

        with self.assertRaises(ConfigError):
            self.gate((0.4, 0.3, 0.3), alpha = 1.0)

    def test_adversary(self):

        gate = self.gate((0.4, 0.3, 0.3), eps = 1e-2)

        # The minimizer, plus one point prescribing the truth beyond the parameter box
        self.assertEqual(gate.adversary.parameters, ((1.0,), (4.0,)))
        self.assertEqual(gate.adversary.kernel[1][1], self.scenario.problem.true_dgp[1])
        self.assertAlmostEqual(gate.adversary_prior.probs[0], 0.99)
        self.assertAlmostEqual(gate.adversary_prior.probs[1], 0.01)

    def test_gate_without_sce(self):

        scenario = build('overconfidence2')

        records = find_equilibria(scenario.problem, scenario.initial_model)

        gate = prior_mass_gate(scenario.problem, scenario.initial_model, scenario.initial_prior, 2.0, records)

        self.assertFalse(gate.passes)
        self.assertEqual(gate.mass, 0.0)
        self.assertEqual(gate.adversary.parameter_count, 1)
        self.assertEqual(gate.adversary_prior.probs, (1.0,))

    def test_adversary_forces_switches_below_the_bound(self):

        problem, model = self.scenario.problem, self.scenario.initial_model

        gate = self.gate((0.4, 0.3, 0.3))

        row = adversary_switch_fraction(problem, model, Belief('theta', (0.4, 0.3, 0.3)), gate.adversary, gate.adversary_prior,
            2.0, SMALL_BUDGET)

        self.assertGreater(row['fraction'], 0.9)
        self.assertEqual(row['paths'], 100)

        gate = self.gate((0.98, 0.01, 0.01))

        row = adversary_switch_fraction(problem, model, Belief('theta', (0.98, 0.01, 0.01)), gate.adversary, gate.adversary_prior,
            2.0, SMALL_BUDGET)

        self.assertGreater(row['persist_frequency'], 0.95)

    def test_sensitivity_table(self):

        rows = adversary_sensitivity(self.scenario.problem, self.scenario.initial_model, Belief('theta', (0.4, 0.3, 0.3)), 2.0,
            self.records, MonteCarloBudget(paths = 20, horizon = 20))

        self.assertEqual([row['eps'] for row in rows], [1e-2, 1e-4])
        self.assertTrue(all(0 <= row['fraction'] <= 1 for row in rows))

class ConstrainedVerdictTests(TestCase):

    def test_locally_dominant_equilibrium(self):

        scenario = build('overconfidence2')

        verdict = constrained_verdict(scenario.problem, scenario.family, scenario.initial_model, budget = SMALL_BUDGET)

        self.assertEqual(verdict.kind, VerdictKind.ConstrainedLocallyRobust)
        self.assertEqual(verdict.basis, ['local-dominance', 'uniformly-quasi-strict-sce'])
        self.assertEqual(verdict.certainty, Certainty.certified)
        self.assertEqual(verdict.witnesses[0]['d'], 1.0)

    def test_kl_minimization_failure(self):

        scenario = build('overconfidence2', {'family': 'plane'})

        verdict = constrained_verdict(scenario.problem, scenario.family, scenario.initial_model, True, SMALL_BUDGET)

        self.assertEqual(verdict.kind, VerdictKind.NotConstrainedLocallyRobust)
        self.assertEqual(verdict.basis, ['local-kl-minimization-failure'])
        self.assertGreater(verdict.adversary['added_points'], 0)
        self.assertEqual(len(verdict.warnings), 1)
        self.assertIn([1.8, 2.2], [witness['point'] for witness in verdict.witnesses])

        # Four actions: convergence is not taken for granted
        verdict = constrained_verdict(scenario.problem, scenario.family, scenario.initial_model, False, SMALL_BUDGET)

        self.assertEqual(verdict.kind, VerdictKind.Inconclusive)
        self.assertEqual(verdict.basis, ['no-certificate'])

    def test_witness_adversary(self):

        scenario = build('overconfidence2', {'family': 'plane'})
        model = scenario.initial_model

        adversary, prior = kl_witness_adversary(scenario.problem, scenario.family, model, scenario.initial_prior,
            [(1.8, 2.2), (1.8, 2.2), (2.0, 2.0)], 0.01)

        self.assertEqual(adversary.parameters, model.parameters + ((1.8, 2.2),))
        self.assertAlmostEqual(prior.probs[-1], 0.01)
        self.assertAlmostEqual(sum(prior.probs[:-1]), 0.99)

        adversary, prior = kl_witness_adversary(scenario.problem, scenario.family, model, scenario.initial_prior, [])

        self.assertEqual(adversary.id, 'theta~local')
        self.assertEqual(adversary.parameters, model.parameters)
        self.assertEqual(prior.probs, scenario.initial_prior.probs)

class MultiModelGateTests(TestCase):

    def test_thresholds(self):

        self.assertEqual(multi_model_gate(2.0, 1, 1.0), {'global_ok': True, 'constrained_ok': True})
        self.assertEqual(multi_model_gate(2.5, 4), {'global_ok': False, 'constrained_ok': False})
        self.assertFalse(multi_model_gate(2.0, 3, 0.5)['constrained_ok'])
        self.assertTrue(multi_model_gate(2.0, 3, 2.0)['constrained_ok'])
        self.assertFalse(multi_model_gate(2.0, 2)['global_ok'])

        with self.assertRaises(ConfigError):
            multi_model_gate(2.0, 0)
