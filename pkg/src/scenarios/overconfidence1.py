#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict

from ..engine.env import DecisionProblem, Gaussian, LinearInOutcome
from ..engine.errors import ScenarioError
from ..engine.model import Belief, SubjectiveModel
from ._base_scenario import BaseScenario, ExpectedAssertion, Provenance, Scenario, model_from_kernel

"""
    A worker overconfident about their own ability b (believing b = 3
    while b = 1) learns the ability omega of a teammate from the output
    y = (a + b) omega + noise, and pays an effort cost a ** 2 / 2. The true
    teammate ability is 2.

    The competing model keeps the same kernel on the smaller parameter set
    {1, 2}. A truth model is registered for use as an observer.
"""

class Overconfidence1(BaseScenario):

    name = 'overconfidence1'
    description = 'Overconfident worker learning a teammate\'s ability; a unique uniformly strict SCE'

    defaults = {
        'believed_ability': 3.0,
        'true_ability': 1.0,
        'teammate_ability': 2.0,
        'omegas': [1.0, 2.0, 3.0],
        'competitor_omegas': [1.0, 2.0],
        'actions': [0.0, 1.0, 2.0, 3.0],
        'effort_cost': 0.5,
        'alpha': 2.0
    }

    def construct(self, parameters : Dict[str, Any]) -> Scenario:

        actions = [float(action) for action in parameters['actions']]
        believed, true_ability = float(parameters['believed_ability']), float(parameters['true_ability'])
        teammate = float(parameters['teammate_ability'])

        if not parameters['omegas'] or not parameters['competitor_omegas']:
            raise ScenarioError('Both parameter sets must be nonempty')

        problem = DecisionProblem(
            actions = tuple(actions),
            true_dgp = tuple(Gaussian((action + true_ability) * teammate, 1.0) for action in actions),
            utility = LinearInOutcome(0, tuple(parameters['effort_cost'] * action ** 2 for action in actions))
        )

        kernel = lambda action, point: Gaussian((action + believed) * point[0], 1.0)

        theta = model_from_kernel('theta', actions, parameters['omegas'], kernel)
        competitor = model_from_kernel('theta_c', actions, parameters['competitor_omegas'], kernel)
        truth = SubjectiveModel('truth', ((0.0,),), tuple((dist,) for dist in problem.true_dgp))

        expected = [
            ExpectedAssertion('equilibrium_count', Provenance.PAPER, {'kind': 'pure', 'equals': 1},
                'exactly one pure Berk-Nash equilibrium'),
            ExpectedAssertion('pure_equilibrium', Provenance.PAPER, {'action': '1', 'minimizers': [[1.0]], 'sce': True,
                'uniformly_quasi_strict': True}, 'effort 1 supported by omega = 1, a uniformly strict SCE'),
            ExpectedAssertion('global_verdict', Provenance.PAPER, {'is': 'GloballyRobust'}, 'globally robust'),
            ExpectedAssertion('prior_gate', Provenance.DERIVED, {'prior': [0.4, 0.3, 0.3], 'is': False},
                'mass 0.4 on omega = 1 is below 1 / alpha'),
            ExpectedAssertion('prior_gate', Provenance.DERIVED, {'prior': [0.98, 0.01, 0.01], 'is': True},
                'mass 0.98 on omega = 1 clears 1 / alpha'),
            ExpectedAssertion('adversary_switching', Provenance.DERIVED, {'prior': [0.4, 0.3, 0.3], 'paths': 200,
                'horizon': 200, 'statistic': 'fraction', 'at_least': 0.95}, 'the adversary forces a switch at mass 0.4'),
            ExpectedAssertion('adversary_switching', Provenance.DERIVED, {'prior': [0.98, 0.01, 0.01], 'paths': 200,
                'horizon': 200, 'statistic': 'persist_frequency', 'at_least': 0.95}, 'the model persists at mass 0.98'),
            ExpectedAssertion('simulation', Provenance.DERIVED, {'paths': 200, 'horizon': 200, 'dogmatic': True,
                'statistic': 'window_plays', 'action': '1', 'at_least': 0.95}, 'a dogmatic worker settles on effort 1')
        ]

        return Scenario(
            name = self.name,
            problem = problem,
            models = {'theta': theta, 'theta_c': competitor, 'truth': truth},
            initial = 'theta',
            priors = {'theta': Belief.uniform(theta), 'theta_c': Belief.uniform(competitor), 'truth': Belief('truth', (1.0,))},
            competing = ('theta_c',),
            alpha = float(parameters['alpha']),
            expected = expected,
            notes = ['The competing model uses omega in {1, 2}, the initial one omega in {1, 2, 3}.']
        )
