#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict

from ..engine.env import CustomUtility, DecisionProblem, Gaussian
from ..engine.errors import ScenarioError
from ..engine.model import Belief
from ._base_scenario import BaseScenario, ExpectedAssertion, Provenance, Scenario, model_from_kernel

"""
    A uniformly strict self-confirming equilibrium that a correctly
    specified competitor still breaks, because the prior puts too little
    mass on the parameter supporting it.

    Outcomes are y ~ N(0, 1) under actions 1 and 2, the payoff is a y. The
    initial model has omega_1 (means 0 under action 1, -1 under action 2)
    and omega_2 (mean 2 under both). Under omega_1, action 1 is strictly
    optimal and predicted exactly. The prior gives omega_1 a mass of
    1 / (2 alpha), while the competitor theta_1 is the truth itself: the
    Bayes factor of theta_1 then stays above 1 / pi(omega_1) = 2 alpha.
"""

class AppendixC2(BaseScenario):

    name = 'appendix_c2'
    description = 'A uniformly strict SCE broken by a correct competitor when its prior mass is small'

    defaults = {
        'alpha': 2.0,
        'prior_scale': 0.5,
        'competitor_means': [0.0, 3.0]
    }

    def construct(self, parameters : Dict[str, Any]) -> Scenario:

        alpha = float(parameters['alpha'])
        mass = float(parameters['prior_scale']) / alpha

        if not 0 < mass < 1:
            raise ScenarioError('The prior mass of omega_1 must lie in (0, 1), got %g' % mass)

        actions = (1.0, 2.0)

        problem = DecisionProblem(
            actions = actions,
            true_dgp = (Gaussian(0.0, 1.0), Gaussian(0.0, 1.0)),
            utility = CustomUtility('scaled_outcome')
        )

        means = {1.0: (0.0, -1.0), 2.0: (2.0, 2.0)}

        models = {'theta': model_from_kernel('theta', actions, [1.0, 2.0],
            lambda action, point: Gaussian(means[point[0]][int(action) - 1], 1.0))}

        for index, mean in enumerate(parameters['competitor_means'], 1):

            model_id = 'theta_%d' % index
            models[model_id] = model_from_kernel(model_id, actions, [float(mean)], lambda action, point: Gaussian(point[0], 1.0))

        priors = {model_id: Belief.uniform(model) for model_id, model in models.items()}
        priors['theta'] = Belief('theta', (mass, 1 - mass))

        expected = [
            ExpectedAssertion('pure_equilibrium', Provenance.PAPER, {'action': '1', 'minimizers': [[1.0]], 'sce': True,
                'uniformly_quasi_strict': True}, 'action 1 is a uniformly strict SCE'),
            ExpectedAssertion('prior_gate', Provenance.DERIVED, {'is': False}, 'the prior mass of omega_1 is below 1 / alpha'),
            ExpectedAssertion('simulation', Provenance.PAPER, {'paths': 200, 'horizon': 200, 'competing': ['theta_1'],
                'statistic': 'ever_switched', 'at_least': 0.95}, 'the correct competitor takes over')
        ]

        return Scenario(
            name = self.name,
            problem = problem,
            models = models,
            initial = 'theta',
            priors = priors,
            competing = tuple(model_id for model_id in models if model_id != 'theta'),
            alpha = alpha,
            expected = expected
        )
