#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from argparse import ArgumentParser, _SubParsersAction, Namespace
from logging import debug, info, warning
from typing import List, Sequence

from ..engine.equilibrium import check_local_dominance, check_locally_kl_minimizing, find_equilibria
from ..engine.policy import PolicyKind, solve_policy
from ..schema.report_formats import equilibria_to_dict, to_json
from ._base_command import BaseCommand, configure_scenario
from ._utils import open_output

"""
    This module enumerates the Berk-Nash equilibria of the scenario's
    initial model, classifies them, and, when the scenario defines a
    q-family, runs the local dominance and local KL-minimization checks
    on each of them.

    It writes "equilibria.json" to the output directory.
"""

class EquilibriaDumper:

    def __init__(self, scenario_input, out_dir : str, grid_resolution : int = 20, eps : float = None,
                 d_candidates : Sequence[float] = (1.0, 0.5, 2.0), args : Namespace = None):

        self.scenario_input = scenario_input

        self.out_dir = out_dir
        self.grid_resolution = grid_resolution
        self.eps = eps
        self.d_candidates = tuple(d_candidates)
        self.args = args or Namespace()

        self.records = []

    def on_init(self):

        scenario = configure_scenario(self.scenario_input.scenario, self.args)

        problem, model = scenario.problem, scenario.initial_model

        numerical_error = 0.0

        if scenario.policy_mode.kind != PolicyKind.myopic:
            numerical_error = solve_policy(problem, model, scenario.policy_mode).grid_error

        records = find_equilibria(problem, model, self.grid_resolution, numerical_error)

        if scenario.family is not None:

            checked = []

            for record in records:

                if record.strategy.is_pure:
                    record = check_local_dominance(problem, scenario.family, model, record, self.eps, self.d_candidates)

                checked.append(check_locally_kl_minimizing(problem, scenario.family, model, record, self.eps))

            records = checked

        if not records:
            warning('Model "%s" has no Berk-Nash equilibrium on a grid of resolution %d' % (model.id, self.grid_resolution))

        for record in records:
            info('Equilibrium: %s' % record.describe(problem))

        self.records = records

        with open_output(self.out_dir, 'equilibria.json') as file_obj:
            file_obj.write(to_json(equilibria_to_dict(problem, model, records, self.grid_resolution)))

        info('Wrote %d equilibrium records to equilibria.json' % len(records))

class EquilibriaCommand(BaseCommand):

    name = 'equilibria'
    option_groups = ('scenario', 'analysis', 'output')

    def get_argument_parser(self, subparsers_object : _SubParsersAction, parents : Sequence[ArgumentParser]) -> ArgumentParser:

        return subparsers_object.add_parser(self.name, parents = list(parents),
            description = 'Enumerate and classify the Berk-Nash equilibria of the initial model, writing equilibria.json.')

    def create_modules(self, scenario_input, args : Namespace) -> List[object]:

        debug('Equilibria requested with a grid of resolution %d' % args.grid)

        return [EquilibriaDumper(scenario_input, args.out, args.grid, args.eps, args.d, args)]
