#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import dirname, realpath
from unittest import TestCase
from json import dumps, loads
from io import StringIO

TESTS_DIR = dirname(realpath(__file__))
ROOT_DIR = dirname(TESTS_DIR)

import sys
sys.path.insert(0, ROOT_DIR)

import numpy as np

from src.schema.scenario_json import dump_scenario, load_scenario, decode_distribution, decode_policy_mode
from src.schema.report_formats import number, plain, to_json, write_csv
from src.engine.env import Gaussian, Mixture
from src.engine.policy import PolicyKind
from src.engine.errors import ConfigError
from src.scenarios import build

"""
    This file is an include file.

    It should be run from the "tests.py" entry point
    located into the current directory

    It contains the tests for the
    "src/schema/scenario_json.py" and "src/schema/report_formats.py" files.
"""

class ScenarioJsonTests(TestCase):

    def test_dumps_are_stable(self):

        for name in ('overconfidence1', 'overconfidence2', 'overfitting'):

            text = dump_scenario(build(name))

            scenario = load_scenario(text)

            self.assertEqual(scenario.name, name)
            self.assertEqual(dump_scenario(scenario), text)

    def test_loaded_scenarios_keep_their_semantics(self):

        original = build('overconfidence2')
        scenario = load_scenario(dump_scenario(original))

        self.assertEqual(scenario.initial_model.parameters, original.initial_model.parameters)
        self.assertEqual(scenario.problem.true_dgp, original.problem.true_dgp)
        self.assertEqual(scenario.family.points, original.family.points)
        self.assertEqual(scenario.family.kernel_fn(2.0, (1.8, 2.2)), original.family.kernel_fn(2.0, (1.8, 2.2)))
        self.assertEqual([assertion.provenance for assertion in scenario.expected],
            [assertion.provenance for assertion in original.expected])

    def test_malformed_json(self):

        with self.assertRaises(ConfigError) as context:
            load_scenario('{\n  "name": }', 'broken.json')

        self.assertIn('broken.json', str(context.exception))
        self.assertIn('line 2, column 11', str(context.exception))

    def test_error_paths(self):

        data = loads(dump_scenario(build('overconfidence1')))
        data['models']['theta']['kernel'][0][1] = {'type': 'weibull'}

        with self.assertRaises(ConfigError) as context:
            load_scenario(dumps(data))

        self.assertIn('$.models.theta.kernel[0][1].type', str(context.exception))

        data = loads(dump_scenario(build('overconfidence1')))
        data['problem']['true_dgp'][2]['variance'] = -1.0

        with self.assertRaises(ConfigError) as context:
            load_scenario(dumps(data))

        self.assertIn('$.problem.true_dgp[2]', str(context.exception))

        data = loads(dump_scenario(build('overconfidence1')))
        data['format_version'] = 7

        with self.assertRaises(ConfigError):
            load_scenario(dumps(data))

    def test_untagged_assertions_are_refused(self):

        data = loads(dump_scenario(build('overconfidence1')))
        del data['expected'][0]['provenance']

        with self.assertRaises(ConfigError) as context:
            load_scenario(dumps(data))

        self.assertIn('$.expected[0]', str(context.exception))
        self.assertIn('untagged', str(context.exception))

        data['expected'][0]['provenance'] = 'FOLKLORE'

        with self.assertRaises(ConfigError):
            load_scenario(dumps(data))

    def test_distributions(self):

        mixture = decode_distribution({'type': 'mixture', 'weights': [0.25, 0.75], 'components': [
            {'type': 'gaussian', 'mean': 0, 'variance': 1}, {'type': 'gaussian', 'mean': 2, 'variance': 1}]})

        self.assertEqual(mixture, Mixture((0.25, 0.75), (Gaussian(0.0, 1.0), Gaussian(2.0, 1.0))))

        with self.assertRaises(ConfigError) as context:
            decode_distribution({'type': 'gaussian', 'mean': 'zero', 'variance': 1})

        self.assertIn('$.mean', str(context.exception))

        with self.assertRaises(ConfigError):
            decode_distribution({'type': 'categorical', 'probs': [0.5, 0.6]})

    def test_policy_modes(self):

        self.assertEqual(decode_policy_mode(None).kind, PolicyKind.myopic)

        mode = decode_policy_mode({'kind': 'grid_dp', 'resolution': 21, 'discount': 0.5})

        self.assertEqual((mode.kind, mode.resolution, mode.discount), (PolicyKind.grid_dp, 21, 0.5))

        with self.assertRaises(ConfigError):
            decode_policy_mode({'kind': 'oracle'})

class ReportFormatTests(TestCase):

    def test_plain_values(self):

        value = plain({1: np.float64(0.5), 'flags': (np.bool_(True), np.int64(3)), 'array': np.arange(2)})

        self.assertEqual(value, {'1': 0.5, 'flags': [True, 3], 'array': [0, 1]})
        self.assertIsInstance(value['flags'][1], int)

        self.assertEqual(loads(to_json(value)), value)

    def test_csv(self):

        self.assertEqual(number(0.1), '0.10000000000000001')
        self.assertEqual(float(number(1 / 3)), 1 / 3)

        file_obj = StringIO()

        count = write_csv(file_obj, ('a', 'b'), iter([{'a': '1', 'b': 'x'}, {'a': '2', 'b': 'y'}]))

        self.assertEqual(count, 2)
        self.assertEqual(file_obj.getvalue(), 'a,b\n1,x\n2,y\n')
