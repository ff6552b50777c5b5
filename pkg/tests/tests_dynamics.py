#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import dirname, realpath
from unittest.mock import patch
from unittest import TestCase

TESTS_DIR = dirname(realpath(__file__))
ROOT_DIR = dirname(TESTS_DIR)

import sys
sys.path.insert(0, ROOT_DIR)

from math import sqrt

import numpy as np

from src.engine.dynamics import SwitcherConfig, Diagnostics, BeliefMassWatch, run_path, initial_state, step, monte_carlo
from src.engine.streams import PathStreams, SEED_ENVIRONMENT_VARIABLE, resolve_seed, wilson_interval
from src.engine.model import Belief
from src.engine.errors import ConfigError
from src.scenarios import build

"""
    This file is an include file.

    It should be run from the "tests.py" entry point
    located into the current directory

    It contains the tests for the
    "src/engine/dynamics.py" and "src/engine/streams.py" files.

    The worker of the "overconfidence1" scenario is used throughout: the
    initial model "theta" fits the truth exactly at effort 1 with
    omega = 1, and the "truth" model is the true process itself.
"""

class ConfigTests(TestCase):

    def setUp(self):

        self.scenario = build('overconfidence1')

    def test_invalid_configs(self):

        scenario = self.scenario

        with self.assertRaises(ConfigError):
            scenario.switcher_config(alpha = 1.0)

        with self.assertRaises(ConfigError):
            SwitcherConfig(scenario.problem, scenario.initial_model, priors = {})

        with self.assertRaises(ConfigError):
            SwitcherConfig(scenario.problem, scenario.initial_model, (scenario.initial_model,),
                priors = {'theta': scenario.initial_prior})

        config = scenario.switcher_config(dogmatic = True)

        with self.assertRaises(ConfigError):
            monte_carlo(config, 0, 10)
        with self.assertRaises(ConfigError):
            monte_carlo(config, 10, 0)

    def test_config_shape(self):

        config = self.scenario.switcher_config(observers = ['truth'])

        self.assertFalse(config.dogmatic)
        self.assertEqual([model.id for model in config.tracked], ['theta', 'theta_c', 'truth'])
        self.assertEqual(sorted(config.policies), ['theta', 'theta_c'])
        self.assertEqual(config.index_of('truth'), 2)

        self.assertTrue(self.scenario.switcher_config(dogmatic = True).dogmatic)

class PathTests(TestCase):

    def setUp(self):

        self.scenario = build('overconfidence1')

    def test_single_path(self):

        config = self.scenario.switcher_config(dogmatic = True)

        record = run_path(config, 50, PathStreams(3, 0))

        self.assertEqual(record.horizon, 50)
        self.assertEqual(record.n_switches, 0)
        self.assertEqual(record.final_model, 'theta')
        self.assertAlmostEqual(sum(record.action_frequencies), 1.0)

        self.assertEqual(len(record.trajectory.periods), 50)
        self.assertEqual(record.trajectory.outcomes.shape, (50, 1))
        self.assertEqual(record.trajectory.models, ['theta'] * 50)
        self.assertAlmostEqual(record.trajectory.utilities.sum(), record.cumulative_utility)

        # The mean belief on omega is 2 at first, which calls for effort 2
        self.assertEqual(record.first_action, 2)

    def test_horizon_prefixes_agree(self):

        config = self.scenario.switcher_config()

        short = run_path(config, 20, PathStreams(1, 7))
        long = run_path(config, 40, PathStreams(1, 7))

        np.testing.assert_array_equal(short.trajectory.actions, long.trajectory.actions[:20])
        np.testing.assert_array_equal(short.trajectory.outcomes, long.trajectory.outcomes[:20])
        self.assertEqual(short.trajectory.models, long.trajectory.models[:20])

    def test_step_by_step(self):

        config = self.scenario.switcher_config()

        state = initial_state(config)

        self.assertEqual(state.t, 0)
        self.assertEqual(state.current_model, 'theta')
        np.testing.assert_allclose(state.beliefs['theta'].probs, Belief.uniform(self.scenario.initial_model).probs)
        self.assertIsNone(state.last)

        rng = np.random.default_rng(4)

        for period in range(1, 6):

            state = step(config, state, rng)

            self.assertEqual(state.t, period)
            self.assertEqual(sum(state.action_counts), period)
            self.assertIn(state.last[0], range(4))
            self.assertIsInstance(state.last[1], float)

        self.assertAlmostEqual(sum(state.beliefs['theta'].probs), 1.0)

    def test_nature_parameters(self):

        config = self.scenario.switcher_config(dogmatic = True, nature = 'theta_c')

        self.assertIn(initial_state(config, np.random.default_rng(0)).nature_parameter, (0, 1))

        record = run_path(config, 10, PathStreams(0, 0))

        self.assertEqual(record.horizon, 10)

class MonteCarloTests(TestCase):

    def setUp(self):

        self.scenario = build('overconfidence1')

    def test_thread_count_does_not_change_results(self):

        config = self.scenario.switcher_config()

        single = monte_carlo(config, 600, 30, seed = 9, threads = 1)
        pooled = monte_carlo(config, 600, 30, seed = 9, threads = 8)

        self.assertEqual(single.to_dict(), pooled.to_dict())

        self.assertEqual([record.path_id for record in pooled.records], list(range(600)))

        for first, second in zip(single.records, pooled.records):
            self.assertEqual(first.switch_times, second.switch_times)
            self.assertEqual(first.cumulative_utility, second.cumulative_utility)

    def test_paths_do_not_depend_on_the_path_count(self):

        config = self.scenario.switcher_config()

        few = monte_carlo(config, 5, 40, seed = 2)
        many = monte_carlo(config, 300, 40, seed = 2)

        for first, second in zip(few.records, many.records[:5]):
            self.assertEqual(first.action_frequencies, second.action_frequencies)
            self.assertAlmostEqual(first.cumulative_utility, second.cumulative_utility, places = 9)

    def test_dogmatic_worker_settles(self):

        config = self.scenario.switcher_config(dogmatic = True, observers = ['truth'])

        diagnostics = Diagnostics(checkpoints = (100, 400), belief_mass = BeliefMassWatch('theta', (0, 1, 2, 3), (0,)),
            keep_records = False)

        summary = monte_carlo(config, 200, 400, seed = 1, diagnostics = diagnostics)

        self.assertEqual(summary.records, [])
        self.assertEqual(summary.persist_frequency, 1.0)
        self.assertEqual(summary.ever_switched, 0.0)
        self.assertEqual(summary.switch_histogram, {0: 200})
        self.assertGreater(summary.absorption_frequencies.get('{1}', 0), 0.95)

        self.assertEqual([entry['t'] for entry in summary.belief_mass], [100, 400])
        self.assertGreater(summary.belief_mass[-1]['median'], 0.99)

        # Both models fit the truth at effort 1, so their likelihood rates meet
        rates = summary.log_likelihood_rates
        self.assertLess(abs(rates['truth'] - rates['theta']), 0.1)

        self.assertNotIn('records', summary.to_dict())

    def test_likelihood_ratios_are_martingales(self):

        # A model close to the truth keeps the variance of the ratio small
        scenario = build('overconfidence1', {'believed_ability': 1.02, 'omegas': [1.98, 2.0, 2.02]})

        config = scenario.switcher_config(dogmatic = True, observers = ['truth'])

        diagnostics = Diagnostics(checkpoints = (50, 100, 200), ratio_pairs = (('theta', 'truth'),), keep_records = False)

        summary = monte_carlo(config, 5000, 200, seed = 4, diagnostics = diagnostics, threads = 4)

        self.assertEqual([entry['t'] for entry in summary.ratio_checkpoints], [50, 100, 200])

        for entry in summary.ratio_checkpoints:
            self.assertGreater(entry['se'], 0)
            self.assertLessEqual(abs(entry['mean'] - 1), 3 * entry['se'], entry)

    def test_maximal_inequality(self):

        config = self.scenario.switcher_config(dogmatic = True, observers = ['theta_c', 'truth'])

        diagnostics = Diagnostics(supremum_stats = (('theta_c', 'truth', 3.0),), keep_records = False)

        summary = monte_carlo(config, 5000, 1000, seed = 5, diagnostics = diagnostics, threads = 4)

        exceedance = summary.supremum_exceedance[0]

        self.assertEqual(exceedance['bound'], 1 / 3)
        self.assertLessEqual(exceedance['frequency'], 1 / 3 + 3 * exceedance['se'])

    def test_high_action_keeps_coming_back(self):

        config = build('example1').switcher_config(dogmatic = True)

        def window_plays(horizon):

            summary = monte_carlo(config, 1000, horizon, seed = 6, diagnostics = Diagnostics(keep_records = False), threads = 4)

            share = sum(frequency for name, frequency in summary.absorption_frequencies.items() if '3' in name.strip('{}').split(','))

            return share, sqrt(share * (1 - share) / 1000)

        (early, early_se), (late, late_se) = window_plays(2000), window_plays(4000)

        self.assertGreater(early, 0.1)
        self.assertLessEqual(early - late, 3 * sqrt(early_se ** 2 + late_se ** 2))

    def test_switching_to_the_truth(self):

        config = self.scenario.switcher_config(competing = ['truth'])

        summary = monte_carlo(config, 200, 100, seed = 3)

        # The first outcome, drawn at effort 2, decides: above about 5.1 the
        # factor clears alpha, below it the worker moves to effort 1 where
        # both models agree and the factor stays under alpha for good
        self.assertGreater(summary.ever_switched, 0.7)
        self.assertAlmostEqual(summary.switched_at_first_period, summary.ever_switched, delta = 0.02)
        self.assertEqual(summary.returned_to_initial, 0.0)
        self.assertGreater(summary.final_model_counts.get('truth', 0), 140)
        self.assertLess(summary.persist_frequency, 0.3)

        low, high = summary.ever_switched_interval
        self.assertLessEqual(low, summary.ever_switched + 1e-12)
        self.assertGreaterEqual(high, summary.ever_switched - 1e-12)


class StreamTests(TestCase):

    def test_streams_are_reproducible(self):

        first = PathStreams(12, 3).noise(10, 2)
        second = PathStreams(12, 3).noise(10, 2)
        other = PathStreams(12, 4).noise(10, 2)

        np.testing.assert_array_equal(first.normals, second.normals)
        self.assertFalse(np.array_equal(first.normals, other.normals))

    def test_wilson_interval(self):

        low, high = wilson_interval(5, 10)

        self.assertAlmostEqual(low + high, 1.0)
        self.assertAlmostEqual(low, 0.2366, places = 4)

        self.assertAlmostEqual(wilson_interval(0, 10)[0], 0.0)
        self.assertAlmostEqual(wilson_interval(10, 10)[1], 1.0)
        self.assertEqual(wilson_interval(0, 0), (0.0, 1.0))

    def test_seed_resolution(self):

        with patch.dict('os.environ', {SEED_ENVIRONMENT_VARIABLE: '77'}):

            self.assertEqual(resolve_seed(5, 3), 5)
            self.assertEqual(resolve_seed(None, 3), 77)

        with patch.dict('os.environ', {SEED_ENVIRONMENT_VARIABLE: ''}):

            self.assertEqual(resolve_seed(None, 3), 3)
            self.assertEqual(resolve_seed(), 0)

        with patch.dict('os.environ', {SEED_ENVIRONMENT_VARIABLE: 'seven'}):

            with self.assertRaises(ConfigError):
                resolve_seed()
