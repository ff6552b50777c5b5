#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict

from ..engine.env import DecisionProblem, Gaussian, LinearInOutcome
from ..engine.model import Belief
from ._base_scenario import BaseScenario, ExpectedAssertion, Provenance, Scenario, model_from_kernel

"""
    Two actions, outcomes y ~ N(1/4, 1) under both, a model
    y ~ N((a - omega) ** 2, 1) with omega in {1, 1.5, 2} and a payoff y.
    The middle parameter predicts the truth at both actions and makes them
    equally good, so every strategy is a self-confirming equilibrium
    supported by it: a p-absorbing mixed equilibrium.
"""

class MixedSce(BaseScenario):

    name = 'mixed_sce'
    description = 'Every strategy is a self-confirming equilibrium at the middle parameter'

    defaults = {
        'omegas': [1.0, 1.5, 2.0],
        'true_mean': 0.25,
        'alpha': 2.0
    }

    def construct(self, parameters : Dict[str, Any]) -> Scenario:

        actions = (1.0, 2.0)

        problem = DecisionProblem(
            actions = actions,
            true_dgp = tuple(Gaussian(float(parameters['true_mean']), 1.0) for action in actions),
            utility = LinearInOutcome()
        )

        theta = model_from_kernel('theta', actions, parameters['omegas'], lambda action, point: Gaussian((action - point[0]) ** 2, 1.0))

        expected = [
            ExpectedAssertion('mixed_component', Provenance.DERIVED, {'support': ['1', '2'], 'low': 0.0, 'high': 1.0,
                'tolerance': 1e-6, 'sce': True}, 'every strategy is an SCE'),
            ExpectedAssertion('pure_equilibrium', Provenance.DERIVED, {'action': '1', 'minimizers': [[1.5]], 'sce': True,
                'quasi_strict': False}, 'action 1 alone ties with action 2'),
            ExpectedAssertion('p_absorption', Provenance.DERIVED, {'support': ['1', '2'], 'paths': 200, 'horizon': 200,
                'at_least': 0.9}, 'the mixed equilibrium absorbs'),
            ExpectedAssertion('global_verdict', Provenance.TRIVIAL, {'is': 'GloballyRobust'}, 'the middle parameter is correct')
        ]

        return Scenario(
            name = self.name,
            problem = problem,
            models = {'theta': theta},
            initial = 'theta',
            priors = {'theta': Belief.uniform(theta)},
            alpha = float(parameters['alpha']),
            expected = expected
        )
