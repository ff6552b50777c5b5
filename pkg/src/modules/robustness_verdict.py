#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from argparse import ArgumentParser, _SubParsersAction, Namespace
from logging import info, warning
from typing import Any, Dict, List, Sequence

from ..engine.equilibrium import find_equilibria
from ..engine.robustness import (MonteCarloBudget, adversary_sensitivity, constrained_verdict, global_verdict,
    local_verdict, multi_model_gate, prior_mass_gate)
from ..schema.report_formats import to_json, verdict_to_dict
from ._base_command import BaseCommand, configure_scenario, monte_carlo_budget
from ._utils import open_output

"""
    This module computes the robustness verdicts of the scenario's initial
    model:

      - the global verdict (or, with --unconstrained, the unconstrained
        local one),
      - the constrained local verdict when the scenario defines a q-family,
      - the prior-mass gate against a single competitor, with the switch
        fractions of the falsifying adversary at several of its masses,
      - the multi-model gate for the scenario's competitors.

    It writes "verdict.json" to the output directory.
"""

class RobustnessReporter:

    def __init__(self, scenario_input, out_dir : str, args : Namespace, unconstrained : bool = False):

        self.scenario_input = scenario_input

        self.out_dir = out_dir
        self.args = args
        self.unconstrained = unconstrained

        self.report : Dict[str, Any] = {}

    def on_init(self):

        args = self.args

        scenario = configure_scenario(self.scenario_input.scenario, args)
        budget : MonteCarloBudget = monte_carlo_budget(scenario, args)

        problem, model, prior = scenario.problem, scenario.initial_model, scenario.initial_prior

        records = find_equilibria(problem, model, args.grid)

        report = {'scenario': scenario.name, 'alpha': scenario.alpha, 'seed': budget.seed, 'verdicts': []}

        if self.unconstrained:
            verdict = local_verdict(problem, model, budget, args.grid, scenario.policy_mode)
        else:
            verdict = global_verdict(problem, model, budget, args.grid, records, scenario.policy_mode)

        info('%s verdict: %s (%s)' % ('Unconstrained local' if self.unconstrained else 'Global', verdict.kind.name, ', '.join(verdict.basis)))

        report['verdicts'].append(dict(verdict_to_dict(problem, model, verdict), scope = 'local' if self.unconstrained else 'global'))

        if scenario.family is not None and not self.unconstrained:

            verdict = constrained_verdict(problem, scenario.family, model, args.assume_convergence or scenario.assume_convergence,
                budget, args.grid, args.eps, args.d, prior, scenario.policy_mode, records)

            info('Constrained local verdict: %s (%s)' % (verdict.kind.name, ', '.join(verdict.basis)))

            report['verdicts'].append(dict(verdict_to_dict(problem, model, verdict), scope = 'constrained'))

        gate = prior_mass_gate(problem, model, prior, scenario.alpha, records)

        report['prior_gate'] = {'passes': gate.passes, 'mass': gate.mass, 'bound': gate.bound,
            'minimizers': [list(model.parameters[index]) for index in gate.union],
            'adversaries': adversary_sensitivity(problem, model, prior, scenario.alpha, records, budget)}

        if not gate.passes:
            warning('The prior puts %.4g on the p-absorbing SCE minimizers, below 1 / alpha = %.4g' % (gate.mass, gate.bound))

        if scenario.competing:

            report['multi_model_gate'] = dict(multi_model_gate(scenario.alpha, len(scenario.competing)),
                competitors = list(scenario.competing),
                constrained_ok_by_d = [{'d': d, 'ok': multi_model_gate(scenario.alpha, len(scenario.competing), d)['constrained_ok']}
                    for d in args.d])

            if not report['multi_model_gate']['global_ok']:
                warning('alpha = %g does not exceed the %d competing models' % (scenario.alpha, len(scenario.competing)))

        self.report = report

        with open_output(self.out_dir, 'verdict.json') as file_obj:
            file_obj.write(to_json(report))

        info('Wrote %d verdicts to verdict.json' % len(report['verdicts']))

class RobustnessCommand(BaseCommand):

    name = 'robustness'

    def get_argument_parser(self, subparsers_object : _SubParsersAction, parents : Sequence[ArgumentParser]) -> ArgumentParser:

        argument_parser = subparsers_object.add_parser(self.name, parents = list(parents),
            description = 'Compute the global and constrained local robustness verdicts, writing verdict.json.')

        argument_parser.add_argument('--unconstrained', action = 'store_true', help = 'Report the unconstrained local verdict instead of the global one.')

        return argument_parser

    def create_modules(self, scenario_input, args : Namespace) -> List[object]:

        return [RobustnessReporter(scenario_input, args.out, args, args.unconstrained)]
