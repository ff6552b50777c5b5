#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from argparse import ArgumentParser, _SubParsersAction, Namespace
from typing import List, Optional, Sequence

from ..engine.errors import ConfigError
from ..engine.policy import PolicyKind, PolicyMode
from ..engine.robustness import MonteCarloBudget
from ..engine.streams import resolve_seed
from ..scenarios._base_scenario import Scenario

"""
    Every sub-command of the command line registers its own argument parser
    and turns the parsed arguments into the modules to attach to the input.
"""

class BaseCommand:

    name : str = None

    # Shared option groups attached to the sub-command, see "main.py"
    option_groups : Sequence[str] = ('scenario', 'simulation', 'analysis', 'output')

    def get_argument_parser(self, subparsers_object : _SubParsersAction, parents : Sequence[ArgumentParser]) -> ArgumentParser:

        pass

    def create_modules(self, scenario_input, args : Namespace) -> List[object]:

        pass

    def scenario_argument(self, args : Namespace) -> Optional[str]:

        return args.scenario

    """
        Commands that need no scenario for some of their arguments do their
        work here and return the exit status; None means "load the scenario
        and run the modules".
    """

    def execute_without_scenario(self, args : Namespace) -> Optional[int]:

        return None

"""
    Helpers shared by the modules: command line overrides of the scenario
    defaults, and the Monte Carlo budget.
"""

def configure_scenario(scenario : Scenario, args : Namespace) -> Scenario:

    alpha = getattr(args, 'alpha', None)

    if alpha is not None:

        if not alpha > 1:
            raise ConfigError('The switching threshold must exceed 1, got %r' % alpha)

        scenario.alpha = alpha

    resolution = getattr(args, 'dp_resolution', None)

    if resolution:
        scenario.policy_mode = PolicyMode(PolicyKind.grid_dp, resolution, scenario.policy_mode.discount)

    return scenario

def check_budget(args : Namespace):

    if getattr(args, 'paths', 1) < 1:
        raise ConfigError('The number of paths must be at least 1, got %r' % args.paths)

    if getattr(args, 'horizon', 1) < 1:
        raise ConfigError('The horizon must be at least 1, got %r' % args.horizon)

    if getattr(args, 'threads', 1) < 1:
        raise ConfigError('The number of threads must be at least 1, got %r' % args.threads)

def monte_carlo_budget(scenario : Scenario, args : Namespace) -> MonteCarloBudget:

    check_budget(args)

    return MonteCarloBudget(args.paths, args.horizon, resolve_seed(args.seed, scenario.seed), args.threads,
        0.05 if args.eps is None else args.eps)
