#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, List
from math import floor

from ..engine.env import Categorical, DecisionProblem, TableUtility
from ..engine.errors import ScenarioError
from ..engine.model import Belief, SubjectiveModel
from ._base_scenario import BaseScenario, ExpectedAssertion, Provenance, Scenario

"""
    Overfitting: a correctly specified agent abandons the truth after a
    single observation.

    Outcomes 1 .. M (atoms 0 .. M - 1) are uniform under both actions,
    where M is the smallest integer above alpha + 1. Action a1 costs c and
    loses M on outcome 1; action a2 only loses M on outcome 1, so a2 is
    optimal under the truth. Competitor theta_n agrees with the truth under
    a1 and, under a2, puts most of its mass on outcome n; theta_1 puts
    1 - (M - 1) eta on outcome 1, the others put 1 / M + eta there.

    Whatever the first outcome, one competitor beats the truth by more
    than alpha, and every competitor then prefers a1 (as c < M eta), under
    which all models predict the same outcomes.
"""

def outcome_count(alpha : float) -> int:

    return int(floor(alpha + 1)) + 1

def competitor_kernel(outcomes : int, eta : float, mode : int) -> List[float]:

    """
        Distribution of a competitor under a2, for the mode 1 .. M.
    """

    if mode == 1:
        return [1 - (outcomes - 1) * eta] + [eta] * (outcomes - 1)

    probs = [eta] * outcomes
    probs[0] = 1 / outcomes + eta
    probs[mode - 1] = 1 - 1 / outcomes - (outcomes - 1) * eta

    return probs

class Overfitting(BaseScenario):

    name = 'overfitting'
    description = 'A correctly specified model abandoned after one observation'

    defaults = {
        'alpha': 2.5,
        'eta': 0.001,
        'cost': 0.001
    }

    def construct(self, parameters : Dict[str, Any]) -> Scenario:

        alpha, eta, cost = float(parameters['alpha']), float(parameters['eta']), float(parameters['cost'])

        if not alpha > 1:
            raise ScenarioError('The switching threshold must exceed 1, got %r' % alpha)

        outcomes = outcome_count(alpha)

        trigger = outcomes - 1 - outcomes * (outcomes - 1) * eta

        if not 0 < eta or not trigger > alpha:
            raise ScenarioError('eta = %g gives a likelihood ratio of %g, which does not exceed alpha = %g' % (eta, trigger, alpha))

        if not 0 < cost < outcomes * eta:
            raise ScenarioError('The cost of a1 must lie in (0, M eta) = (0, %g), got %g' % (outcomes * eta, cost))

        uniform = Categorical(tuple([1 / outcomes] * outcomes))

        problem = DecisionProblem(
            actions = (0.0, 1.0),
            true_dgp = (uniform, uniform),
            utility = TableUtility((
                tuple([-cost - outcomes] + [-cost] * (outcomes - 1)),
                tuple([-float(outcomes)] + [0.0] * (outcomes - 1))
            )),
            action_names = ('a1', 'a2')
        )

        models = {'theta': SubjectiveModel('theta', ((0.0,),), ((uniform,), (uniform,)))}

        for mode in range(1, outcomes + 1):

            model_id = 'theta_%d' % mode

            models[model_id] = SubjectiveModel(model_id, ((float(mode),),),
                ((uniform,), (Categorical(tuple(competitor_kernel(outcomes, eta, mode))),)))

        competing = tuple(model_id for model_id in models if model_id != 'theta')

        expected = [
            ExpectedAssertion('derived_value', Provenance.DERIVED, {'key': 'outcomes', 'at_least': alpha + 1 + 1e-12,
                'at_most': alpha + 2}, 'M is the smallest integer above alpha + 1'),
            ExpectedAssertion('likelihood_ratio', Provenance.DERIVED, {'competitor': 'theta_2', 'action': 'a2', 'outcome': 1,
                'equals': trigger, 'tolerance': 1e-12, 'exceeds_alpha': True}, 'the ratio (1 - 1/M - (M - 1) eta) M exceeds alpha'),
            ExpectedAssertion('pure_equilibrium', Provenance.TRIVIAL, {'action': 'a2', 'sce': True}, 'a2 is optimal under the truth'),
            ExpectedAssertion('global_verdict', Provenance.TRIVIAL, {'is': 'GloballyRobust'}, 'the truth is globally robust'),
            ExpectedAssertion('simulation', Provenance.PAPER, {'paths': 1000, 'horizon': 200, 'statistic': 'switched_at_first_period',
                'equals': 1.0}, 'every path switches after the first observation'),
            ExpectedAssertion('simulation', Provenance.PAPER, {'paths': 1000, 'horizon': 200, 'statistic': 'returned_to_initial',
                'equals': 0.0}, 'no path switches back'),
            ExpectedAssertion('simulation', Provenance.PAPER, {'paths': 1000, 'horizon': 200, 'statistic': 'final_model',
                'model': 'theta', 'equals': 0.0}, 'no path ends on the truth')
        ]

        return Scenario(
            name = self.name,
            problem = problem,
            models = models,
            initial = 'theta',
            priors = {model_id: Belief(model_id, (1.0,)) for model_id in models},
            competing = competing,
            alpha = alpha,
            expected = expected,
            derived = {'outcomes': float(outcomes), 'trigger': trigger}
        )
