#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, Sequence, Tuple

from ..engine.env import DecisionProblem, Gaussian, LinearInOutcome, Product
from ..engine.model import Belief
from ._base_scenario import BaseScenario, ExpectedAssertion, Provenance, Scenario, model_from_kernel

"""
    Two actions, each revealing a pair of outcomes: action 1 shows (x1, x3)
    and action 2 shows (x2, x4), both drawn as (N(0, 1), N(1, 1)). The
    payoff is the second coordinate.

    The initial model has two parameters. omega_1 predicts means (1, 1)
    under action 1 and (1, 0) under action 2, omega_2 the reverse, so
    action 1 at omega_1 and action 2 at omega_2 are both uniformly strict
    Berk-Nash equilibria, neither self-confirming: the first coordinate is
    always off by one.

    Competitor theta_1 agrees with the initial model under action 1 and
    only differs where the agent no longer plays, so against it alone the
    agent persists. Competitor theta_2 gets the first coordinate right
    under action 1 and wins as soon as it is allowed to compete.
"""

# Per model, per parameter, the outcome means under actions 1 and 2
MEANS : Dict[str, Tuple[Tuple[Tuple[float, float], Tuple[float, float]], ...]] = {
    'theta': (((1.0, 1.0), (1.0, 0.0)), ((1.0, 0.0), (1.0, 1.0))),
    'theta_1': (((1.0, 1.0), (0.0, 0.0)), ((1.0, 0.0), (0.0, 1.0))),
    'theta_2': (((0.0, 1.0), (1.0, 0.0)), ((0.0, 0.0), (1.0, 1.0)))
}

def pair(means : Sequence[float]) -> Product:

    return Product(tuple(Gaussian(float(mean), 1.0) for mean in means))

class AppendixC1(BaseScenario):

    name = 'appendix_c1'
    description = 'Two non-self-confirming strict equilibria; one competitor leaves the agent alone, the other does not'

    defaults = {
        'prior': [0.9, 0.1],
        'alpha': 2.0
    }

    def construct(self, parameters : Dict[str, Any]) -> Scenario:

        actions = (1.0, 2.0)

        problem = DecisionProblem(
            actions = actions,
            true_dgp = (pair((0.0, 1.0)), pair((0.0, 1.0))),
            utility = LinearInOutcome(1)
        )

        models = {model_id: model_from_kernel(model_id, actions, [1.0, 2.0],
            lambda action, point, means = means: pair(means[int(point[0]) - 1][int(action) - 1]))
            for model_id, means in MEANS.items()}

        expected = [
            ExpectedAssertion('pure_equilibrium', Provenance.PAPER, {'action': '1', 'minimizers': [[1.0]], 'sce': False,
                'uniformly_quasi_strict': True}, 'action 1 at omega_1, strict, not self-confirming'),
            ExpectedAssertion('pure_equilibrium', Provenance.PAPER, {'action': '2', 'minimizers': [[2.0]], 'sce': False,
                'uniformly_quasi_strict': True}, 'action 2 at omega_2, strict, not self-confirming'),
            ExpectedAssertion('equilibrium_count', Provenance.DERIVED, {'kind': 'sce', 'equals': 0}, 'no self-confirming equilibrium'),
            ExpectedAssertion('simulation', Provenance.PAPER, {'paths': 200, 'horizon': 200, 'competing': ['theta_1'],
                'statistic': 'persist_frequency', 'at_least': 0.95}, 'the agent persists against theta_1 alone'),
            ExpectedAssertion('simulation', Provenance.PAPER, {'paths': 200, 'horizon': 100,
                'statistic': 'ever_switched', 'at_least': 0.95}, 'the agent abandons its model once theta_2 competes')
        ]

        return Scenario(
            name = self.name,
            problem = problem,
            models = models,
            initial = 'theta',
            priors = {model_id: Belief.from_weights(model_id, parameters['prior']) for model_id in models},
            competing = ('theta_1', 'theta_2'),
            alpha = float(parameters['alpha']),
            expected = expected,
            notes = ['The payoff is the second observed coordinate under both actions.']
        )
