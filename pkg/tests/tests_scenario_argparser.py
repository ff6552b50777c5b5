#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import dirname, realpath
from unittest import TestCase

TESTS_DIR = dirname(realpath(__file__))
ROOT_DIR = dirname(TESTS_DIR)

import sys
sys.path.insert(0, ROOT_DIR)

from src.inputs.scenario_argparser import ScenarioArgParser, \
    ScenarioArgType

"""
    This file is an include file.

    It should be run from the "tests.py" entry point
    located into the current directory

    It contains the tests for the
    "src/inputs/scenario_argparser.py" file.
"""

class ScenarioArgparserTests(TestCase):

    def test_arg_parsing_invalid(self):
        test_case = ScenarioArgParser('Team')
        self.assertEqual(test_case.arg_type, None)
        self.assertEqual(test_case.scenario_name, None)

        test_case = ScenarioArgParser('team:')
        self.assertEqual(test_case.arg_type, None)

        test_case = ScenarioArgParser('team:=3')
        self.assertEqual(test_case.arg_type, None)

        test_case = ScenarioArgParser('')
        self.assertEqual(test_case.arg_type, None)

    def test_arg_parsing_valid(self):

        test_case = ScenarioArgParser('overconfidence1')
        self.assertEqual(test_case.arg_type, ScenarioArgType.builtin)
        self.assertEqual(test_case.scenario_name, 'overconfidence1')
        self.assertEqual(test_case.parameters, {})

        test_case = ScenarioArgParser('mixed_sce')
        self.assertEqual(test_case.arg_type, ScenarioArgType.builtin)
        self.assertEqual(test_case.scenario_name, 'mixed_sce')

        test_case = ScenarioArgParser('team:believed_ability=0.3')
        self.assertEqual(test_case.arg_type, ScenarioArgType.builtin_with_parameters)
        self.assertEqual(test_case.scenario_name, 'team')
        self.assertEqual(test_case.parameters, {'believed_ability': 0.3})

        test_case = ScenarioArgParser('overfitting:alpha=3,eta=0.0005')
        self.assertEqual(test_case.arg_type, ScenarioArgType.builtin_with_parameters)
        self.assertEqual(test_case.scenario_name, 'overfitting')
        self.assertEqual(test_case.parameters, {'alpha': 3, 'eta': 0.0005})

        test_case = ScenarioArgParser('example1:omegas=[1, 2, 3],actions=[1,3]')
        self.assertEqual(test_case.arg_type, ScenarioArgType.builtin_with_parameters)
        self.assertEqual(test_case.parameters, {'omegas': [1, 2, 3], 'actions': [1, 3]})

        test_case = ScenarioArgParser('overconfidence2:family=plane')
        self.assertEqual(test_case.parameters, {'family': 'plane'})

        test_case = ScenarioArgParser('scenarios/team.json')
        self.assertEqual(test_case.arg_type, ScenarioArgType.json_file)
        self.assertEqual(test_case.json_path, 'scenarios/team.json')
        self.assertEqual(test_case.scenario_name, None)

        test_case = ScenarioArgParser('/tmp/Dump.json.gz')
        self.assertEqual(test_case.arg_type, ScenarioArgType.json_file)
        self.assertEqual(test_case.json_path, '/tmp/Dump.json.gz')
