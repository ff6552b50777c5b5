#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict

from ..engine.env import AbsOutcome, DecisionProblem, Gaussian
from ..engine.model import Belief
from ._base_scenario import BaseScenario, ExpectedAssertion, Provenance, Scenario, model_from_kernel

"""
    Two actions {1, 3}, outcomes y ~ N(1, 1) whatever the action, a model
    y ~ N(omega - a, 1) with omega in {1, 2, 3}, and a payoff |y|.

    Playing 1 is a self-confirming equilibrium supported by omega = 2, but
    action 3 is equally good there, so it is not quasi-strict; the mixed
    strategies putting weight at least 3/4 on action 1 are Berk-Nash
    equilibria too. A dogmatic modeler keeps coming back to action 3.
"""

class Example1(BaseScenario):

    name = 'example1'
    description = 'A self-confirming equilibrium that is not quasi-strict; the high action recurs'

    defaults = {
        'actions': [1.0, 3.0],
        'omegas': [1.0, 2.0, 3.0],
        'true_mean': 1.0,
        'alpha': 2.0
    }

    def construct(self, parameters : Dict[str, Any]) -> Scenario:

        actions = [float(action) for action in parameters['actions']]

        problem = DecisionProblem(
            actions = tuple(actions),
            true_dgp = tuple(Gaussian(float(parameters['true_mean']), 1.0) for action in actions),
            utility = AbsOutcome()
        )

        theta = model_from_kernel('theta', actions, parameters['omegas'], lambda action, point: Gaussian(point[0] - action, 1.0))

        expected = [
            ExpectedAssertion('pure_equilibrium', Provenance.PAPER, {'action': '1', 'minimizers': [[2.0]], 'sce': True,
                'quasi_strict': False, 'uniformly_quasi_strict': False}, 'action 1 is an SCE, not quasi-strict'),
            ExpectedAssertion('equilibrium_count', Provenance.DERIVED, {'kind': 'pure', 'equals': 1}, 'action 3 alone is no equilibrium'),
            ExpectedAssertion('mixed_component', Provenance.DERIVED, {'support': ['1', '3'], 'low': 0.75, 'high': 1.0,
                'tolerance': 1e-6, 'sce': False}, 'weights of action 1 in [3/4, 1] form a component'),
            ExpectedAssertion('simulation', Provenance.PAPER, {'paths': 200, 'horizon': 400, 'dogmatic': True,
                'statistic': 'window_plays', 'action': '3', 'at_least': 0.1}, 'the high action is played again late in the run')
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
