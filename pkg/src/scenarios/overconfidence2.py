#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict
from math import exp

from ..engine.env import DecisionProblem, Gaussian, LinearInOutcome, Product
from ..engine.errors import ScenarioError
from ..engine.model import Belief
from ._base_scenario import BaseScenario, ExpectedAssertion, Provenance, Scenario, model_from_kernel
from .kernels import make_family

"""
    The overconfident worker also receives a noisy signal s = b ** 2 + xi,
    xi ~ N(0, 2), about their own ability. The model believes b = 2 while
    b = 1 and the teammate ability is 3; its parameters are the pairs
    (b, omega) in {(2, 1), (2, 2), (2, 3)}.

    The q-family varies both coordinates over [0, 4] with step 0.2, either
    restricted to b >= omega ("ordered") or over the whole square
    ("plane"). At effort 2 the first moment of the likelihood ratio against
    (2, 2) is exp((2 + b) omega - 1.5 b ** 2 - 2), which is at most 1 on
    the ordered half only.
"""

FAMILY_PREDICATES = {
    'ordered': 'b_at_least_omega',
    'plane': ''
}

def dominance_closed_form(b : float, omega : float) -> float:

    return exp((2 + b) * omega - 1.5 * b * b - 2)

class Overconfidence2(BaseScenario):

    name = 'overconfidence2'
    description = 'Overconfident worker with a signal about their own ability; constrained local robustness'

    defaults = {
        'parameters': [[2.0, 1.0], [2.0, 2.0], [2.0, 3.0]],
        'true_ability': 1.0,
        'teammate_ability': 3.0,
        'signal_variance': 2.0,
        'actions': [0.0, 1.0, 2.0, 3.0],
        'effort_cost': 0.5,
        'family': 'ordered',
        'family_step': 0.2,
        'alpha': 2.0
    }

    def construct(self, parameters : Dict[str, Any]) -> Scenario:

        if parameters['family'] not in FAMILY_PREDICATES:
            raise ScenarioError('Unknown family variant "%s" (known: %s)' % (parameters['family'], ', '.join(FAMILY_PREDICATES)))

        actions = [float(action) for action in parameters['actions']]
        true_ability, teammate = float(parameters['true_ability']), float(parameters['teammate_ability'])
        signal_variance = float(parameters['signal_variance'])
        step = float(parameters['family_step'])

        problem = DecisionProblem(
            actions = tuple(actions),
            true_dgp = tuple(Product((Gaussian((action + true_ability) * teammate, 1.0), Gaussian(true_ability ** 2, signal_variance)))
                for action in actions),
            utility = LinearInOutcome(0, tuple(parameters['effort_cost'] * action ** 2 for action in actions))
        )

        family = make_family('overconfidence_signal', {'signal_variance': signal_variance}, (0.0, 0.0), (4.0, 4.0),
            (step, step), FAMILY_PREDICATES[parameters['family']])

        theta = model_from_kernel('theta', actions, parameters['parameters'], family.kernel_fn)

        # The ordered half of the 21 x 21 grid over [0, 4] ** 2
        levels = [round(0.2 * index, 12) for index in range(21)]
        points = [(b, omega) for b in levels for omega in levels if b >= omega]

        expected = [
            ExpectedAssertion('equilibrium_count', Provenance.PAPER, {'kind': 'all', 'equals': 1}, 'a unique Berk-Nash equilibrium'),
            ExpectedAssertion('pure_equilibrium', Provenance.PAPER, {'action': '2', 'minimizers': [[2.0, 2.0]], 'sce': False,
                'uniformly_quasi_strict': True}, 'effort 2 at (2, 2), uniformly strict and not self-confirming'),
            ExpectedAssertion('global_verdict', Provenance.PAPER, {'is': 'NotGloballyRobust'}, 'no SCE, not globally robust'),
            ExpectedAssertion('dominance_moment', Provenance.DERIVED, {'action': '2', 'reference': [2.0, 2.0], 'd': 1.0,
                'points': [list(point) for point in points], 'expected': [dominance_closed_form(*point) for point in points],
                'at_most': 1e-9}, 'moments match exp((2 + b) omega - 1.5 b^2 - 2)'),
            ExpectedAssertion('dominance_moment', Provenance.PAPER, {'action': '2', 'reference': [2.0, 2.0], 'd': 1.0,
                'points': [list(point) for point in points], 'statistic': 'maximum', 'equals': 1.0, 'tolerance': 0.0},
                'moments are at most 1 on b >= omega, with 1 at (2, 2)')
        ]

        if parameters['family'] == 'ordered':
            expected.append(ExpectedAssertion('constrained_verdict', Provenance.PAPER, {'is': 'ConstrainedLocallyRobust'},
                'locally dominant on b >= omega'))
        else:
            expected.append(ExpectedAssertion('constrained_verdict', Provenance.PAPER, {'is': 'NotConstrainedLocallyRobust',
                'assume_convergence': True}, 'not locally KL-minimizing over the whole square'))

        return Scenario(
            name = self.name,
            problem = problem,
            models = {'theta': theta},
            initial = 'theta',
            priors = {'theta': Belief.uniform(theta)},
            family = family,
            alpha = float(parameters['alpha']),
            assume_convergence = parameters['family'] == 'plane',
            expected = expected,
            notes = ['Parameter (2, 3) lies outside b >= omega; it is kept in the model and only reported.']
        )
