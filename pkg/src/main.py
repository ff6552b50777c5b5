#!/usr/bin/python3
#-*- encoding: Utf-8 -*-

from logging import DEBUG, INFO, basicConfig, error, debug
from argparse import RawTextHelpFormatter
from argparse import ArgumentParser
from typing import Dict
from sys import stderr

from .engine.errors import MisbeliefError
from .engine.streams import SEED_ENVIRONMENT_VARIABLE

from .modules._base_command import BaseCommand
from .modules.equilibria_dump import EquilibriaCommand
from .modules.robustness_verdict import RobustnessCommand
from .modules.simulation_dump import SimulateCommand
from .modules.scenario_checker import ScenarioCommand
from .modules._utils import FileType

from .inputs.scenario_argparser import ScenarioArgParser, ScenarioArgType
from .inputs.json_scenario_read import JsonScenarioReader
from .inputs.builtin_scenario import BuiltinScenarioInput
from .inputs._base_input import EXIT_CONFIG_ERROR

ALL_COMMAND_CLASSES = [EquilibriaCommand, RobustnessCommand, SimulateCommand, ScenarioCommand]

"""
    The option groups shared between sub-commands are built once, as parent
    parsers, and attached to the sub-commands listing them in their
    "option_groups" attribute.
"""

def build_option_groups() -> Dict[str, ArgumentParser]:

    scenario_options = ArgumentParser(add_help = False)

    group = scenario_options.add_argument_group(title = 'Scenario')

    group.add_argument('--scenario', metavar = 'SCENARIO', help = 'Scenario to work on. Possible syntaxes:\n' +
        '  - "NAME": a built-in scenario (see "scenario list")\n' +
        '  - "NAME:key=value[,key=value...]": a built-in scenario with overridden\n' +
        '    parameters, e.g. "team:believed_ability=0.3" (values are read as JSON\n' +
        '    when they parse, as strings otherwise)\n' +
        '  - "PATH.json" or "PATH.json.gz": a scenario file, as written by "scenario dump"')
    group.add_argument('-v', '--verbose', action = 'store_true', help = 'Add output for LP margins, value iteration sweeps and Monte Carlo progress.')

    simulation_options = ArgumentParser(add_help = False)

    group = simulation_options.add_argument_group(title = 'Simulation options')

    group.add_argument('--paths', metavar = 'N', type = int, default = 1000, help = 'Number of independent paths, by default 1000.')
    group.add_argument('--horizon', metavar = 'T', type = int, default = 1000, help = 'Number of periods per path, by default 1000.')
    group.add_argument('--seed', metavar = 'S', type = int, default = None, help = 'Master seed. Falls back to the %s environment variable, then to\nthe seed of the scenario.' % SEED_ENVIRONMENT_VARIABLE)
    group.add_argument('--alpha', metavar = 'A', type = float, default = None, help = 'Switching threshold on the Bayes factor (must exceed 1), by default the\none of the scenario.')
    group.add_argument('--threads', metavar = 'K', type = int, default = 1, help = 'Worker threads for the Monte Carlo runs. The output does not depend on it.')

    analysis_options = ArgumentParser(add_help = False)

    group = analysis_options.add_argument_group(title = 'Analysis options')

    group.add_argument('--grid', metavar = 'R', type = int, default = 20, help = 'Resolution of the mixed strategy grid, by default 20.')
    group.add_argument('--dp-resolution', metavar = 'R', type = int, default = None, help = 'Solve the policies by dynamic programming on a belief grid of this resolution.')
    group.add_argument('--eps', metavar = 'E', type = float, default = None, help = 'Neighbourhood radius of the local checks, by default the grid step of the\nq-family (0.05 for the Monte Carlo checks).')
    group.add_argument('--d', metavar = 'D', type = float, nargs = '+', default = [1.0, 0.5, 2.0], help = 'Exponents tried for the local dominance moment, by default 1 0.5 2.')
    group.add_argument('--assume-convergence', action = 'store_true', help = 'Assume that action frequencies converge, so that an equilibrium failing the\nlocal KL-minimization check gives a NotConstrainedLocallyRobust verdict.')

    output_options = ArgumentParser(add_help = False)

    group = output_options.add_argument_group(title = 'Output')

    group.add_argument('--out', metavar = 'DIR', default = '.', help = 'Directory receiving the reports, created when missing, by default the\ncurrent directory.')

    return {
        'scenario': scenario_options,
        'simulation': simulation_options,
        'analysis': analysis_options,
        'output': output_options
    }

def main(argv = None):

    parser = ArgumentParser(
        description = 'Misspecified Bayesian learning with model switching: Berk-Nash equilibria, robustness verdicts and Monte Carlo simulation.',
        formatter_class = RawTextHelpFormatter
    )

    option_groups = build_option_groups()

    subparsers = parser.add_subparsers(dest = 'command', metavar = 'COMMAND')
    subparsers.required = True

    command_name_to_command_object : Dict[str, BaseCommand] = {}

    for command_class in ALL_COMMAND_CLASSES:

        command_object = command_class()

        sub_parser = command_object.get_argument_parser(subparsers, [option_groups[name] for name in command_object.option_groups])

        sub_parser.formatter_class = RawTextHelpFormatter

        command_name_to_command_object[command_object.name] = command_object

    args = parser.parse_args(argv)

    basicConfig(stream = stderr, level = DEBUG if args.verbose else INFO,
                format='[%(asctime)s | %(levelname)s @ %(filename)s:%(lineno)d ] %(message)s',
                force = True, datefmt = '%H:%M:%S')

    command = command_name_to_command_object[args.command]

    exit_status = command.execute_without_scenario(args)

    if exit_status is not None:
        return exit_status

    scenario_arg = command.scenario_argument(args)

    if not scenario_arg:

        error('The "%s" command needs a scenario, see --help' % command.name)

        return EXIT_CONFIG_ERROR

    """
        The input owning the scenario is instancied below.
    """

    parsed_arg = ScenarioArgParser(scenario_arg)

    if not parsed_arg.arg_type:

        error('"%s" is neither a scenario name, a "NAME:key=value" override nor a ' % scenario_arg +
            'path to a ".json" scenario file. See --help for further details.')

        return EXIT_CONFIG_ERROR

    try:

        if parsed_arg.arg_type == ScenarioArgType.json_file:
            scenario_input = JsonScenarioReader(FileType('r')(parsed_arg.json_path))
        else:
            scenario_input = BuiltinScenarioInput(parsed_arg.scenario_name, parsed_arg.parameters)

        debug('Running the "%s" command' % command.name)

        for module in command.create_modules(scenario_input, args):
            scenario_input.add_module(module)

    except MisbeliefError as exception:

        error(str(exception))

        return EXIT_CONFIG_ERROR

    scenario_input.run()

    return scenario_input.exit_status
