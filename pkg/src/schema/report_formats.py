#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, IO, Iterator, Sequence
from csv import DictWriter
from json import dumps

import numpy as np

from ..engine.dynamics import MCSummary
from ..engine.env import DecisionProblem
from ..engine.equilibrium import EquilibriumRecord
from ..engine.model import SubjectiveModel
from ..engine.robustness import Verdict

"""
    Report layouts written by the modules: JSON documents for equilibria,
    verdicts and Monte Carlo summaries, CSV tables for per-path data.

    CSV columns are stable; numbers are written with 17 significant digits.
"""

RUNS_COLUMNS = ('path_id', 'n_switches', 'final_model', 'persist_proxy', 'absorbed_actions', 'cumulative_utility')

SWITCHES_COLUMNS = ('path_id', 't', 'from_model', 'to_model', 'log_ratio', 'tie')

TRAJECTORY_COLUMNS = ('path_id', 't', 'model', 'action', 'outcome_0', 'utility')

def number(value : float) -> str:

    return '%.17g' % value

def plain(value : Any) -> Any:

    """
        Converts numpy scalars and arrays, tuples and non-string keys so that
        the value can be passed to json.dumps.
    """

    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    elif isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    elif isinstance(value, np.ndarray):
        return plain(value.tolist())
    elif isinstance(value, np.bool_):
        return bool(value)
    elif isinstance(value, np.integer):
        return int(value)
    elif isinstance(value, np.floating):
        return float(value)

    return value

def to_json(data : Any) -> str:

    return dumps(plain(data), sort_keys = True, indent = 2) + '\n'

"""
    Equilibria and verdicts.
"""

def record_to_dict(problem : DecisionProblem, model : SubjectiveModel, record : EquilibriumRecord) -> Dict[str, Any]:

    data = {
        'description': record.describe(problem),
        'strategy': dict(zip(problem.action_names, record.strategy.probs)),
        'support': [problem.action_names[index] for index in record.support],
        'minimizers': [list(model.parameters[index]) for index in record.minimizers],
        'supporting_beliefs': [list(belief.probs) for belief in record.supporting_beliefs],
        'margin': record.margin,
        'quasi_strict': record.quasi_strict,
        'uniformly_quasi_strict': record.uniformly_quasi_strict,
        'sce': record.sce,
        'knife_edge': record.knife_edge,
        'p_absorbing': None,
        'family_checks': None,
        'component': None
    }

    if record.p_absorbing is not None:
        data['p_absorbing'] = dict(record.p_absorbing.__dict__, is_p_absorbing = record.p_absorbing.is_p_absorbing)

    if record.family_checks is not None:
        data['family_checks'] = dict(record.family_checks.__dict__)

    if record.component is not None:
        data['component'] = {'size': len(record.component.members), 'lows': record.component.lows,
            'highs': record.component.highs, 'interval': record.component.interval}

    return data

def equilibria_to_dict(problem : DecisionProblem, model : SubjectiveModel, records : Sequence[EquilibriumRecord],
                       grid_resolution : int) -> Dict[str, Any]:

    return {
        'model': model.id,
        'actions': list(problem.action_names),
        'grid_resolution': grid_resolution,
        'equilibria': [record_to_dict(problem, model, record) for record in records]
    }

def verdict_to_dict(problem : DecisionProblem, model : SubjectiveModel, verdict : Verdict) -> Dict[str, Any]:

    return {
        'model': model.id,
        'kind': verdict.kind.name,
        'basis': list(verdict.basis),
        'certainty': verdict.certainty.name,
        'witnesses': verdict.witnesses,
        'monte_carlo': verdict.monte_carlo,
        'adversary': verdict.adversary,
        'warnings': verdict.warnings,
        'equilibria': [record_to_dict(problem, model, record) for record in verdict.equilibria]
    }

"""
    Monte Carlo output.
"""

def summary_to_dict(summary : MCSummary) -> Dict[str, Any]:

    return plain(summary.to_dict())

def runs_rows(problem : DecisionProblem, summary : MCSummary) -> Iterator[Dict[str, str]]:

    for record in summary.records:

        yield {
            'path_id': str(record.path_id),
            'n_switches': str(record.n_switches),
            'final_model': record.final_model,
            'persist_proxy': str(int(record.persist_proxy)),
            'absorbed_actions': ' '.join(problem.action_names[index] for index in record.absorbed_actions),
            'cumulative_utility': number(record.cumulative_utility)
        }

def switches_rows(summary : MCSummary) -> Iterator[Dict[str, str]]:

    for record in summary.records:
        for event in record.switch_events:

            yield {
                'path_id': str(record.path_id),
                't': str(event.t),
                'from_model': event.from_model,
                'to_model': event.to_model,
                'log_ratio': number(event.log_ratio),
                'tie': str(int(event.tie))
            }

def trajectory_rows(problem : DecisionProblem, summary : MCSummary) -> Iterator[Dict[str, str]]:

    for record in summary.records:

        trajectory = record.trajectory

        if trajectory is None:
            continue

        for position, t in enumerate(trajectory.periods):

            yield {
                'path_id': str(record.path_id),
                't': str(int(t)),
                'model': trajectory.models[position],
                'action': problem.action_names[int(trajectory.actions[position])],
                'outcome_0': number(trajectory.outcomes[position, 0]),
                'utility': number(trajectory.utilities[position])
            }

def write_csv(file_obj : IO[str], columns : Sequence[str], rows) -> int:

    writer = DictWriter(file_obj, fieldnames = list(columns), lineterminator = '\n')
    writer.writeheader()

    count = 0

    for row in rows:
        writer.writerow(row)
        count += 1

    return count
