#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from unittest import TestLoader, TestSuite, TextTestRunner
import sys

"""
    Doc.: https://docs.python.org/3/library/unittest.html
"""

loader = TestLoader()
runner = TextTestRunner(verbosity = 2)

import tests_env
import tests_model
import tests_simplex
import tests_policy
import tests_dynamics
import tests_equilibrium
import tests_robustness
import tests_scenarios
import tests_schema
import tests_scenario_argparser
import tests_cli

suite = TestSuite()

for module in (tests_env, tests_model, tests_simplex, tests_policy, tests_dynamics, tests_equilibrium,
               tests_robustness, tests_scenarios, tests_schema, tests_scenario_argparser, tests_cli):
    suite.addTests(loader.loadTestsFromModule(module))

result = runner.run(suite)

sys.exit(0 if result.wasSuccessful() else 1)
