#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from argparse import ArgumentParser, RawTextHelpFormatter, _SubParsersAction, Namespace
from logging import info, warning
from typing import List, Optional, Sequence
import sys

from ..engine.streams import resolve_seed
from ..scenarios import list_scenarios
from ..scenarios.checks import AssertionOutcome, run_assertions
from ..schema.scenario_json import dump_scenario
from ._base_command import BaseCommand, check_budget, configure_scenario
from ._utils import FileType

"""
    This module runs the expected assertions carried by a scenario and
    prints one line per assertion to stdout:

        PASS  PAPER    pure equilibrium at action 1
        FAIL  DERIVED  ...

    A failed assertion sets "assertions_failed", which the input turns
    into the exit status 2.
"""

class ScenarioChecker:

    def __init__(self, scenario_input, args : Namespace, out_file = None):

        self.scenario_input = scenario_input

        self.args = args
        self.out_file = out_file or sys.stdout
        self.owns_file = out_file is not None and out_file is not sys.__stdout__

        self.outcomes : List[AssertionOutcome] = []
        self.assertions_failed = False

    def on_init(self):

        args = self.args

        check_budget(args)

        scenario = configure_scenario(self.scenario_input.scenario, args)

        if not scenario.expected:
            warning('Scenario "%s" carries no expected assertion' % scenario.name)

        self.outcomes = run_assertions(scenario, resolve_seed(args.seed, scenario.seed), args.threads, args.grid)

        for outcome in self.outcomes:

            print('%-4s  %-7s  %s%s' % ('PASS' if outcome.passed else 'FAIL', outcome.assertion.provenance.name,
                outcome.assertion.description or outcome.assertion.check,
                ' (%s)' % outcome.detail if outcome.detail else ''), file = self.out_file)

        failed = sum(not outcome.passed for outcome in self.outcomes)

        self.assertions_failed = failed > 0

        info('%d of %d assertions of scenario "%s" passed' % (len(self.outcomes) - failed, len(self.outcomes), scenario.name))

    def __del__(self):

        if self.owns_file and not self.out_file.closed:
            self.out_file.close()

"""
    This module writes the scenario as a JSON document that "--scenario"
    loads back.
"""

class ScenarioDumper:

    def __init__(self, scenario_input, args : Namespace, out_file = None):

        self.scenario_input = scenario_input

        self.args = args
        self.out_file = out_file or sys.stdout
        self.owns_file = out_file is not None and out_file is not sys.__stdout__

    def on_init(self):

        scenario = configure_scenario(self.scenario_input.scenario, self.args)

        self.out_file.write(dump_scenario(scenario))
        self.out_file.flush()

    def __del__(self):

        if self.owns_file and not self.out_file.closed:
            self.out_file.close()

class ScenarioCommand(BaseCommand):

    name = 'scenario'
    option_groups = ('scenario', 'simulation', 'analysis')

    def get_argument_parser(self, subparsers_object : _SubParsersAction, parents : Sequence[ArgumentParser]) -> ArgumentParser:

        argument_parser = subparsers_object.add_parser(self.name, parents = list(parents), formatter_class = RawTextHelpFormatter,
            description = 'Manage the built-in scenarios:\n' +
                '  - "list": print the name and description of every built-in scenario\n' +
                '  - "dump NAME": print the scenario as JSON, loadable with --scenario\n' +
                '  - "run NAME": check the expected assertions of the scenario (exit status 2 on failure)')

        argument_parser.add_argument('action', choices = ('list', 'dump', 'run'))
        argument_parser.add_argument('name', metavar = 'NAME', nargs = '?', help = 'Scenario, with the syntaxes of --scenario.')
        argument_parser.add_argument('--to', metavar = 'FILE', help = 'Write the output of "dump" or "run" to FILE rather than stdout.')

        return argument_parser

    def scenario_argument(self, args : Namespace) -> Optional[str]:

        return args.name or args.scenario

    def execute_without_scenario(self, args : Namespace) -> Optional[int]:

        if args.action != 'list':
            return None

        for name, description in list_scenarios():
            print('%-16s %s' % (name, description))

        return 0

    def create_modules(self, scenario_input, args : Namespace) -> List[object]:

        out_file = FileType('w')(args.to) if args.to else None

        if args.action == 'dump':
            return [ScenarioDumper(scenario_input, args, out_file)]

        return [ScenarioChecker(scenario_input, args, out_file)]
