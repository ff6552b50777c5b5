#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Callable, Dict, List, Optional, Tuple
from dataclasses import dataclass
from logging import info, warning, error
from traceback import format_exc
from math import log

import numpy as np

from ..engine.dynamics import MCSummary, monte_carlo
from ..engine.env import outcome_rows
from ..engine.equilibrium import EquilibriumRecord, estimate_p_absorbing, find_equilibria
from ..engine.errors import MisbeliefError, ScenarioError
from ..engine.model import Belief, as_point, dominance_moment
from ..engine.robustness import (MonteCarloBudget, Verdict, adversary_switch_fraction, constrained_verdict,
    global_verdict, prior_mass_gate)
from ._base_scenario import ExpectedAssertion, Scenario

"""
    The machine-checkable assertions a scenario may carry. Each check reads
    its arguments, computes an observed value and compares it with the
    expectation given through one of the keys "equals" (with an optional
    "tolerance"), "at_least", "at_most" or "is".
"""

DEFAULT_TOLERANCE = 1e-9

@dataclass
class AssertionOutcome:

    assertion : ExpectedAssertion
    passed : bool
    observed : Any
    detail : str = ''

class AssertionContext:

    """
        Caches the results shared by several assertions of one scenario.
    """

    def __init__(self, scenario : Scenario, seed : Optional[int] = None, threads : int = 1, grid_resolution : int = 20):

        self.scenario = scenario
        self.seed = scenario.seed if seed is None else seed
        self.threads = threads
        self.grid_resolution = grid_resolution

        self._records : Optional[List[EquilibriumRecord]] = None
        self._simulations : Dict[str, MCSummary] = {}

    @property
    def problem(self):

        return self.scenario.problem

    @property
    def model(self):

        return self.scenario.initial_model

    def records(self) -> List[EquilibriumRecord]:

        if self._records is None:
            self._records = find_equilibria(self.problem, self.model, self.grid_resolution)

        return self._records

    def budget(self, arguments : Dict[str, Any]) -> MonteCarloBudget:

        return MonteCarloBudget(int(arguments.get('paths', 1000)), int(arguments.get('horizon', 1000)),
            self.seed, self.threads, float(arguments.get('eps', 0.05)))

    def action_indices(self, names) -> Tuple[int, ...]:

        return tuple(sorted(self.problem.index_of(name) for name in names))

    def prior(self, arguments : Dict[str, Any]) -> Belief:

        if 'prior' in arguments:
            return Belief.from_weights(self.model.id, arguments['prior'])

        return self.scenario.initial_prior

def compare(observed, arguments : Dict[str, Any]) -> bool:

    if 'is' in arguments:
        return observed == arguments['is']

    if observed is None:
        return False

    if 'equals' in arguments:
        return abs(observed - arguments['equals']) <= arguments.get('tolerance', DEFAULT_TOLERANCE)

    return observed >= arguments.get('at_least', -np.inf) and observed <= arguments.get('at_most', np.inf)

"""
    Equilibrium checks.
"""

def _flags_match(record : EquilibriumRecord, arguments : Dict[str, Any]) -> bool:

    return all(getattr(record, flag) == arguments[flag] for flag in ('sce', 'quasi_strict', 'uniformly_quasi_strict', 'knife_edge')
        if flag in arguments)

def check_pure_equilibrium(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    action_index = context.problem.index_of(arguments['action'])

    for record in context.records():

        if record.strategy.is_pure and record.support == (action_index,):

            minimizers = sorted(context.model.parameters[index] for index in record.minimizers)

            if 'minimizers' in arguments and minimizers != sorted(as_point(point) for point in arguments['minimizers']):
                return False, 'minimizers %r' % minimizers

            return _flags_match(record, arguments), record.describe(context.problem)

    return False, 'no pure equilibrium at %s' % arguments['action']

def check_equilibrium_count(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    records = context.records()

    kind = arguments.get('kind', 'all')

    selected = {
        'all': records,
        'pure': [record for record in records if record.strategy.is_pure],
        'mixed': [record for record in records if not record.strategy.is_pure],
        'sce': [record for record in records if record.sce]
    }[kind]

    return len(selected), '; '.join(record.describe(context.problem) for record in selected)

def check_mixed_component(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    """
        A mixed component with the given support; "low" and "high" bound
        the range of the first support action's weight.
    """

    support = context.action_indices(arguments['support'])
    tolerance = arguments.get('tolerance', 0.05)

    for record in context.records():

        if record.strategy.is_pure or record.support != support:
            continue

        if record.component is not None and record.component.interval is not None:
            low, high = record.component.interval
        elif record.component is not None:
            low, high = record.component.lows[support[0]], record.component.highs[support[0]]
        else:
            low = high = record.strategy.probs[support[0]]

        bounds_match = ('low' not in arguments or abs(low - arguments['low']) <= tolerance) and \
                       ('high' not in arguments or abs(high - arguments['high']) <= tolerance)

        return bounds_match and _flags_match(record, arguments), '%s over [%.6g, %.6g]' % (record.describe(context.problem), low, high)

    return False, 'no mixed component over %r' % (arguments['support'],)

def check_p_absorption(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    support = context.action_indices(arguments['support'])

    for record in context.records():

        if record.support == support:

            budget = context.budget(arguments)

            record = estimate_p_absorbing(context.problem, context.model, record, budget.eps, budget.paths,
                budget.horizon, budget.seed, budget.threads, context.scenario.policy_mode)

            absorption = record.p_absorbing

            if absorption.certified:
                return 1.0, 'certified (%s)' % absorption.route

            return absorption.estimate, 'estimate %.4f in [%.4f, %.4f]' % (absorption.estimate, *absorption.interval)

    return None, 'no equilibrium with support %r' % (arguments['support'],)

"""
    Verdict checks.
"""

def _verdict_detail(verdict : Verdict) -> str:

    return '%s (%s, %s)' % (verdict.kind.name, ', '.join(verdict.basis), verdict.certainty.name)

def check_global_verdict(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    verdict = global_verdict(context.problem, context.model, context.budget(arguments), context.grid_resolution,
        context.records(), context.scenario.policy_mode)

    return verdict.kind.name, _verdict_detail(verdict)

def check_constrained_verdict(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    """
        Optionally also bounds one coordinate of every returned witness
        point within ["witness_low", "witness_high").
    """

    scenario = context.scenario

    if scenario.family is None:
        raise ScenarioError('Scenario "%s" defines no q-family' % scenario.name)

    verdict = constrained_verdict(context.problem, scenario.family, context.model,
        arguments.get('assume_convergence', scenario.assume_convergence), context.budget(arguments), context.grid_resolution,
        prior = scenario.initial_prior, policy_mode = scenario.policy_mode, records = context.records())

    if 'witness_coordinate' in arguments:

        coordinate = int(arguments['witness_coordinate'])

        values = [witness['point'][coordinate] for witness in verdict.witnesses if 'point' in witness]

        if not values or not all(arguments['witness_low'] <= value < arguments['witness_high'] for value in values):
            return 'witness out of range', '%s, witness coordinate values %r' % (_verdict_detail(verdict), sorted(set(values)))

    return verdict.kind.name, _verdict_detail(verdict)

def check_prior_gate(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    prior = context.prior(arguments)

    gate = prior_mass_gate(context.problem, context.model, prior, arguments.get('alpha', context.scenario.alpha), context.records())

    return gate.passes, 'mass %.6g against a bound of %.6g' % (gate.mass, gate.bound)

def check_adversary_switching(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    """
        Switch and persistence frequencies against the adversary built
        from the prior-mass gate.
    """

    prior = context.prior(arguments)
    alpha = arguments.get('alpha', context.scenario.alpha)

    gate = prior_mass_gate(context.problem, context.model, prior, alpha, context.records(), arguments.get('adversary_eps', 1e-4))

    row = adversary_switch_fraction(context.problem, context.model, prior, gate.adversary, gate.adversary_prior, alpha,
        context.budget(arguments), context.scenario.policy_mode)

    statistic = arguments.get('statistic', 'fraction')

    return row[statistic], 'switch fraction %.4f, persistence %.4f over %d paths of %d periods' % (row['fraction'],
        row['persist_frequency'], row['paths'], row['horizon'])

"""
    Simulation checks.
"""

SIMULATION_KEYS = ('paths', 'horizon', 'alpha', 'competing', 'priors', 'dogmatic')

def simulate(context : AssertionContext, arguments : Dict[str, Any]) -> MCSummary:

    key = repr([(name, arguments.get(name)) for name in SIMULATION_KEYS])

    if key in context._simulations:
        return context._simulations[key]

    scenario = context.scenario

    priors = {model_id: Belief.from_weights(model_id, weights) for model_id, weights in arguments.get('priors', {}).items()}

    config = scenario.switcher_config(arguments.get('alpha'), arguments.get('competing'), priors, arguments.get('dogmatic', False))

    summary = monte_carlo(config, int(arguments.get('paths', 200)), int(arguments.get('horizon', 200)), context.seed, threads = context.threads)

    context._simulations[key] = summary

    return summary

def _window_plays(summary : MCSummary, action_name : str) -> float:

    return sum(frequency for name, frequency in summary.absorption_frequencies.items() if action_name in name.strip('{}').split(','))

def check_simulation(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    """
        A statistic of the Monte Carlo summary. "window_plays" is the
        fraction of paths playing the given action in the persistence
        window; "final_model" the fraction of paths ending on the given
        model.
    """

    summary = simulate(context, arguments)

    statistic = arguments['statistic']

    if statistic == 'window_plays':
        observed = _window_plays(summary, str(arguments['action']))
    elif statistic == 'final_model':
        observed = summary.final_model_counts.get(arguments['model'], 0) / summary.paths
    else:
        observed = getattr(summary, statistic)

    return observed, '%s = %r over %d paths of %d periods' % (statistic, observed, summary.paths, summary.horizon)

"""
    Arithmetic checks.
"""

def check_likelihood_ratio(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    """
        Bayes factor of a competitor against the initial model after a
        single observation, both evaluated at their priors.
    """

    scenario = context.scenario

    action_index = context.problem.index_of(arguments['action'])
    rows = outcome_rows(context.problem.outcome_space, [arguments['outcome']])

    def log_predictive(model_id : str) -> float:

        model = scenario.models[model_id]
        log_densities = model.stacked(action_index).log_density_batch(rows)[0]

        return float(np.log(np.dot(scenario.priors[model_id].array, np.exp(log_densities))))

    ratio = float(np.exp(log_predictive(arguments['competitor']) - log_predictive(scenario.initial)))

    if arguments.get('exceeds_alpha') is not None and (log(ratio) > log(scenario.alpha)) != arguments['exceeds_alpha']:
        return None, 'ratio %.17g against alpha = %g' % (ratio, scenario.alpha)

    return ratio, 'ratio %.17g against alpha = %g' % (ratio, scenario.alpha)

def check_dominance_moment(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    """
        Largest deviation between the moments computed through the family
        kernel and the expected values listed point by point, or with
        "statistic" set to "maximum", the largest moment.
    """

    family = context.scenario.family

    if family is None:
        raise ScenarioError('Scenario "%s" defines no q-family' % context.scenario.name)

    action_index = context.problem.index_of(arguments['action'])

    moments = [dominance_moment(context.problem, family.kernel_fn, action_index, point, arguments['reference'], arguments.get('d', 1.0))
        for point in arguments['points']]

    if arguments.get('statistic', 'deviation') == 'maximum':
        return max(moments), 'largest moment %.17g over %d points' % (max(moments), len(moments))

    deviations = [abs(moment - expected) for moment, expected in zip(moments, arguments['expected'])]

    return max(deviations), 'largest deviation %.3g over %d points' % (max(deviations), len(deviations))

def check_derived_value(context : AssertionContext, arguments : Dict[str, Any]) -> Tuple[Any, str]:

    value = context.scenario.derived[arguments['key']]

    return value, '%s = %.17g' % (arguments['key'], value)

CHECKS : Dict[str, Callable[[AssertionContext, Dict[str, Any]], Tuple[Any, str]]] = {
    'pure_equilibrium': check_pure_equilibrium,
    'equilibrium_count': check_equilibrium_count,
    'mixed_component': check_mixed_component,
    'p_absorption': check_p_absorption,
    'global_verdict': check_global_verdict,
    'constrained_verdict': check_constrained_verdict,
    'prior_gate': check_prior_gate,
    'adversary_switching': check_adversary_switching,
    'simulation': check_simulation,
    'likelihood_ratio': check_likelihood_ratio,
    'dominance_moment': check_dominance_moment,
    'derived_value': check_derived_value
}

# Checks whose observed value is itself the verdict
BOOLEAN_CHECKS = ('pure_equilibrium', 'mixed_component')

def run_assertion(context : AssertionContext, assertion : ExpectedAssertion) -> AssertionOutcome:

    if assertion.check not in CHECKS:
        raise ScenarioError('Unknown assertion check "%s" (known: %s)' % (assertion.check, ', '.join(sorted(CHECKS))))

    try:
        observed, detail = CHECKS[assertion.check](context, assertion.arguments)
    except (MisbeliefError, KeyError) as exception:
        error(format_exc())
        return AssertionOutcome(assertion, False, None, 'error: %s' % exception)

    if assertion.check in BOOLEAN_CHECKS:
        passed = bool(observed)
    else:
        passed = compare(observed, assertion.arguments)

    return AssertionOutcome(assertion, passed, observed, detail)

def run_assertions(scenario : Scenario, seed : Optional[int] = None, threads : int = 1,
                   grid_resolution : int = 20) -> List[AssertionOutcome]:

    context = AssertionContext(scenario, seed, threads, grid_resolution)

    outcomes = []

    for assertion in scenario.expected:

        outcome = run_assertion(context, assertion)

        (info if outcome.passed else warning)('%s [%s] %s: %s' % ('PASS' if outcome.passed else 'FAIL',
            assertion.provenance.name, assertion.description or assertion.check, outcome.detail))

        outcomes.append(outcome)

    return outcomes
