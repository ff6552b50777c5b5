#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from argparse import ArgumentParser, _SubParsersAction, Namespace
from logging import info, warning
from typing import Any, Dict, List, Sequence

from ..engine.dynamics import Diagnostics, MCSummary, monte_carlo
from ..engine.errors import ConfigError
from ..engine.streams import resolve_seed
from ..schema.report_formats import (RUNS_COLUMNS, SWITCHES_COLUMNS, TRAJECTORY_COLUMNS, runs_rows, summary_to_dict,
    switches_rows, to_json, trajectory_rows, write_csv)
from ._base_command import BaseCommand, check_budget, configure_scenario
from ._utils import open_output

"""
    This module runs the switcher (or, with --dogmatic, the dogmatic
    modeler) of the scenario over independent seeded paths, and writes:

      - "summary.json": the Monte Carlo summary,
      - "runs.csv": one row per path,
      - "switches.csv": one row per model switch,
      - "trajectories.csv" (with --trajectories K): one row every K
        periods of every path.

    With --check-doubling, the run is repeated at twice the horizon and
    both persistence proxy frequencies are reported.
"""

class SimulationDumper:

    def __init__(self, scenario_input, out_dir : str, args : Namespace, trajectory_every : int = 0,
                 check_doubling : bool = False, dogmatic : bool = False):

        self.scenario_input = scenario_input

        self.out_dir = out_dir
        self.args = args
        self.trajectory_every = trajectory_every
        self.check_doubling = check_doubling
        self.dogmatic = dogmatic

        self.summary : MCSummary = None

    def on_init(self):

        args = self.args

        check_budget(args)

        if self.trajectory_every < 0:
            raise ConfigError('The trajectory thinning must be positive, got %r' % self.trajectory_every)

        scenario = configure_scenario(self.scenario_input.scenario, args)
        problem = scenario.problem

        seed = resolve_seed(args.seed, scenario.seed)

        config = scenario.switcher_config(dogmatic = self.dogmatic)

        summary = monte_carlo(config, args.paths, args.horizon, seed,
            Diagnostics(trajectory_every = self.trajectory_every), args.threads)

        report : Dict[str, Any] = summary_to_dict(summary)
        report['scenario'] = scenario.name
        report['dogmatic'] = self.dogmatic

        if self.check_doubling:

            doubled = monte_carlo(config, args.paths, 2 * args.horizon, seed, Diagnostics(keep_records = False), args.threads)

            report['doubling'] = {
                'horizon': doubled.horizon,
                'persist_frequency': doubled.persist_frequency,
                'persist_interval': list(doubled.persist_interval),
                'agrees': not (doubled.persist_interval[1] < summary.persist_interval[0] or
                               summary.persist_interval[1] < doubled.persist_interval[0])
            }

            if not report['doubling']['agrees']:
                warning('The persistence proxy moves from %.4f at T = %d to %.4f at T = %d' % (summary.persist_frequency,
                    summary.horizon, doubled.persist_frequency, doubled.horizon))

        self.summary = summary

        with open_output(self.out_dir, 'summary.json') as file_obj:
            file_obj.write(to_json(report))

        with open_output(self.out_dir, 'runs.csv') as file_obj:
            count = write_csv(file_obj, RUNS_COLUMNS, runs_rows(problem, summary))

        with open_output(self.out_dir, 'switches.csv') as file_obj:
            switches = write_csv(file_obj, SWITCHES_COLUMNS, switches_rows(summary))

        info('Wrote summary.json, %d rows to runs.csv and %d rows to switches.csv' % (count, switches))

        if self.trajectory_every:

            with open_output(self.out_dir, 'trajectories.csv') as file_obj:
                count = write_csv(file_obj, TRAJECTORY_COLUMNS, trajectory_rows(problem, summary))

            info('Wrote %d rows to trajectories.csv' % count)

class SimulateCommand(BaseCommand):

    name = 'simulate'

    def get_argument_parser(self, subparsers_object : _SubParsersAction, parents : Sequence[ArgumentParser]) -> ArgumentParser:

        argument_parser = subparsers_object.add_parser(self.name, parents = list(parents),
            description = 'Simulate the switcher over seeded paths, writing summary.json, runs.csv and switches.csv.')

        argument_parser.add_argument('--trajectories', metavar = 'K', type = int, default = 0, help = 'Also write trajectories.csv, keeping one period out of K.')
        argument_parser.add_argument('--check-doubling', action = 'store_true', help = 'Rerun at twice the horizon and report both persistence frequencies.')
        argument_parser.add_argument('--dogmatic', action = 'store_true', help = 'Simulate the dogmatic modeler, ignoring the competing models.')

        return argument_parser

    def create_modules(self, scenario_input, args : Namespace) -> List[object]:

        return [SimulationDumper(scenario_input, args.out, args, args.trajectories, args.check_doubling, args.dogmatic)]
