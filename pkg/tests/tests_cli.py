#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from os.path import dirname, realpath, join, exists
from contextlib import redirect_stdout
from tempfile import TemporaryDirectory
from unittest import TestCase
from json import dumps, loads
from io import StringIO
from csv import DictReader

TESTS_DIR = dirname(realpath(__file__))
ROOT_DIR = dirname(TESTS_DIR)

import sys
sys.path.insert(0, ROOT_DIR)

from src.main import main
from src.inputs._base_input import EXIT_SUCCESS, EXIT_CONFIG_ERROR, EXIT_ASSERTION_FAILURE
from src.schema.report_formats import RUNS_COLUMNS

"""
    This file is an include file.

    It should be run from the "tests.py" entry point
    located into the current directory

    It contains the tests for the
    "src/main.py" entry point and the modules it runs.
"""

def run(*argv):

    output = StringIO()

    with redirect_stdout(output):
        status = main(list(argv))

    return status, output.getvalue()

class CommandLineTests(TestCase):

    def setUp(self):

        self.directory = TemporaryDirectory()
        self.path = self.directory.name

    def tearDown(self):

        self.directory.cleanup()

    def read(self, *names):

        with open(join(self.path, *names)) as file_obj:
            return file_obj.read()

    def dump(self, name, file_name):

        status, _ = run('scenario', 'dump', name, '--to', join(self.path, file_name))

        self.assertEqual(status, EXIT_SUCCESS)

        return loads(self.read(file_name))

    def test_scenario_list(self):

        status, output = run('scenario', 'list')

        self.assertEqual(status, EXIT_SUCCESS)
        self.assertIn('overconfidence1', output)
        self.assertIn('appendix_c2', output)

    def test_dump_and_load(self):

        data = self.dump('team:believed_ability=0.3', 'team.json')

        self.assertEqual(data['parameters']['believed_ability'], 0.3)

        status, _ = run('scenario', 'dump', join(self.path, 'team.json'), '--to', join(self.path, 'again.json'))

        self.assertEqual(status, EXIT_SUCCESS)
        self.assertEqual(self.read('again.json'), self.read('team.json'))

    def test_simulate(self):

        status, _ = run('simulate', '--scenario', 'overconfidence1', '--paths', '1', '--horizon', '1',
            '--out', join(self.path, 'first'))

        self.assertEqual(status, EXIT_SUCCESS)

        with open(join(self.path, 'first', 'runs.csv')) as file_obj:
            rows = list(DictReader(file_obj))

        self.assertEqual(len(rows), 1)
        self.assertEqual(tuple(rows[0]), RUNS_COLUMNS)
        self.assertTrue(exists(join(self.path, 'first', 'switches.csv')))
        self.assertFalse(exists(join(self.path, 'first', 'trajectories.csv')))

        summary = loads(self.read('first', 'summary.json'))

        self.assertEqual((summary['paths'], summary['horizon'], summary['scenario']), (1, 1, 'overconfidence1'))

    def test_simulations_are_reproducible(self):

        for name, threads in (('first', '1'), ('second', '3')):

            status, _ = run('simulate', '--scenario', 'overconfidence1', '--paths', '40', '--horizon', '20', '--seed', '8',
                '--threads', threads, '--trajectories', '5', '--out', join(self.path, name))

            self.assertEqual(status, EXIT_SUCCESS)

        self.assertEqual(self.read('first', 'summary.json'), self.read('second', 'summary.json'))
        self.assertEqual(self.read('first', 'runs.csv'), self.read('second', 'runs.csv'))
        self.assertEqual(self.read('first', 'trajectories.csv'), self.read('second', 'trajectories.csv'))

    def test_equilibria(self):

        status, _ = run('equilibria', '--scenario', 'overconfidence1', '--out', self.path)

        self.assertEqual(status, EXIT_SUCCESS)

        report = loads(self.read('equilibria.json'))

        self.assertEqual(report['model'], 'theta')
        self.assertEqual([record['description'] for record in report['equilibria']],
            ['pure 1 [quasi_strict, uniformly_quasi_strict, sce]'])

    def test_robustness(self):

        status, _ = run('robustness', '--scenario', 'overconfidence1', '--paths', '20', '--horizon', '20', '--out', self.path)

        self.assertEqual(status, EXIT_SUCCESS)

        report = loads(self.read('verdict.json'))

        self.assertEqual([(verdict['scope'], verdict['kind']) for verdict in report['verdicts']], [('global', 'GloballyRobust')])
        self.assertEqual([row['eps'] for row in report['prior_gate']['adversaries']], [1e-2, 1e-4])
        self.assertEqual(report['prior_gate']['minimizers'], [[1.0]])
        self.assertTrue(report['multi_model_gate']['global_ok'])

    def test_configuration_errors(self):

        self.assertEqual(run('simulate', '--scenario', 'overconfidence9', '--out', self.path)[0], EXIT_CONFIG_ERROR)
        self.assertEqual(run('simulate', '--scenario', 'overconfidence1:effort=2', '--out', self.path)[0], EXIT_CONFIG_ERROR)
        self.assertEqual(run('simulate', '--scenario', 'Not a scenario', '--out', self.path)[0], EXIT_CONFIG_ERROR)
        self.assertEqual(run('simulate', '--scenario', join(self.path, 'missing.json'), '--out', self.path)[0], EXIT_CONFIG_ERROR)
        self.assertEqual(run('simulate', '--scenario', 'overconfidence1', '--paths', '0', '--out', self.path)[0], EXIT_CONFIG_ERROR)
        self.assertEqual(run('simulate', '--scenario', 'overconfidence1', '--alpha', '1', '--out', self.path)[0], EXIT_CONFIG_ERROR)
        self.assertEqual(run('equilibria', '--out', self.path)[0], EXIT_CONFIG_ERROR)

    def test_scenario_run(self):

        data = self.dump('overconfidence1', 'checked.json')

        data['expected'] = [assertion for assertion in data['expected']
            if assertion['check'] in ('equilibrium_count', 'pure_equilibrium', 'prior_gate')]

        with open(join(self.path, 'checked.json'), 'w') as file_obj:
            file_obj.write(dumps(data))

        status, output = run('scenario', 'run', join(self.path, 'checked.json'))

        self.assertEqual(status, EXIT_SUCCESS)
        self.assertEqual(len(output.splitlines()), 4)
        self.assertTrue(all(line.startswith('PASS') for line in output.splitlines()))

        data['expected'].append({'check': 'equilibrium_count', 'provenance': 'DERIVED', 'arguments': {'kind': 'pure', 'equals': 3},
            'description': 'a wrong count'})

        with open(join(self.path, 'failing.json'), 'w') as file_obj:
            file_obj.write(dumps(data))

        status, output = run('scenario', 'run', join(self.path, 'failing.json'), '--to', join(self.path, 'report.txt'))

        self.assertEqual(status, EXIT_ASSERTION_FAILURE)
        self.assertEqual(output, '')
        self.assertTrue(self.read('report.txt').splitlines()[-1].startswith('FAIL'))
