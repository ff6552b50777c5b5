#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict

import numpy as np

from ..engine.env import DecisionProblem, Gaussian, LinearInOutcome
from ..engine.errors import ScenarioError
from ..engine.model import Belief
from ._base_scenario import BaseScenario, ExpectedAssertion, Provenance, Scenario, model_from_kernel
from .kernels import make_family

"""
    A worker with a dogmatic self-perception b_hat learns the ability
    omega of a teammate from the output g(a, b, omega) = (a + b) omega plus
    a unit noise, and pays an effort cost a ** 2 / 2. The true ability is
    b = 1 and the teammate's is omega = 2.

    Overconfidence (b_hat > 1) makes beliefs and efforts reinforce each
    other, and a pure self-confirming equilibrium exists. Underconfidence
    makes them push against each other: for b_hat = 0.3 the only
    equilibria mix efforts 2 and 3 at omega = 2.5, and a competitor with a
    slightly higher self-perception fits strictly better nearby.
"""

def strict_self_confirming(actions, believed : float, true_ability : float, teammate : float, cost : float):

    """
        Efforts that are the unique best response to the teammate ability
        explaining their own true mean output.
    """

    confirmed = []

    for action in actions:

        omega = (action + true_ability) * teammate / (action + believed)

        payoffs = np.array([(other + believed) * omega - cost * other ** 2 for other in actions])
        best = np.flatnonzero(payoffs >= payoffs.max() - 1e-9)

        if len(best) == 1 and actions[best[0]] == action:
            confirmed.append(action)

    return confirmed

class Team(BaseScenario):

    name = 'team'
    description = 'Over- and underconfidence about one\'s own ability in a team'

    defaults = {
        'believed_ability': 2.0,
        'true_ability': 1.0,
        'teammate_ability': 2.0,
        'actions': [1.0, 2.0, 3.0],
        'effort_cost': 0.5,
        'ability_range': [0.0, 2.0],
        'teammate_range': [1.0, 4.0],
        'step': 0.05,
        'alpha': 2.0
    }

    def construct(self, parameters : Dict[str, Any]) -> Scenario:

        believed, true_ability = float(parameters['believed_ability']), float(parameters['true_ability'])
        teammate = float(parameters['teammate_ability'])
        actions = [float(action) for action in parameters['actions']]
        b_low, b_high = [float(value) for value in parameters['ability_range']]
        omega_low, omega_high = [float(value) for value in parameters['teammate_range']]
        step = float(parameters['step'])

        if not b_low <= believed <= b_high:
            raise ScenarioError('The believed ability %g lies outside [%g, %g]' % (believed, b_low, b_high))

        if min(actions) + b_low <= 0:
            raise ScenarioError('Output must increase in the teammate ability: a + b must stay positive')

        family = make_family('team', {'variance': 1.0}, (b_low, omega_low), (b_high, omega_high), (step, step))

        problem = DecisionProblem(
            actions = tuple(actions),
            true_dgp = tuple(family.kernel_fn(action, (true_ability, teammate)) for action in actions),
            utility = LinearInOutcome(0, tuple(parameters['effort_cost'] * action ** 2 for action in actions))
        )

        # The grid plus, per action, the teammate ability matching the true mean output
        omegas = {round(value, 10) for value in np.arange(omega_low, omega_high + step / 2, step)}

        for action in actions:

            matching = (action + true_ability) * teammate / (action + believed)

            if omega_low <= matching <= omega_high:
                omegas.add(matching)

        theta = model_from_kernel('theta', actions, [(believed, omega) for omega in sorted(omegas)], family.kernel_fn)

        confirmed = strict_self_confirming(actions, believed, true_ability, teammate, float(parameters['effort_cost']))

        if believed == true_ability:

            expected = [ExpectedAssertion('global_verdict', Provenance.TRIVIAL, {'is': 'GloballyRobust'}, 'a correct self-perception')]

        elif confirmed:

            expected = [
                ExpectedAssertion('pure_equilibrium', Provenance.DERIVED, {'action': '%g' % confirmed[0], 'sce': True,
                    'uniformly_quasi_strict': True}, 'a uniformly strict self-confirming effort'),
                ExpectedAssertion('global_verdict', Provenance.PAPER, {'is': 'GloballyRobust'}, 'globally robust')
            ]

        else:

            expected = [
                ExpectedAssertion('equilibrium_count', Provenance.DERIVED, {'kind': 'pure', 'equals': 0}, 'no pure equilibrium'),
                ExpectedAssertion('equilibrium_count', Provenance.PAPER, {'kind': 'sce', 'equals': 0}, 'no self-confirming equilibrium'),
                ExpectedAssertion('constrained_verdict', Provenance.PAPER, {'is': 'NotConstrainedLocallyRobust', 'assume_convergence': True,
                    'witness_coordinate': 0, 'witness_low': believed + 1e-9, 'witness_high': true_ability + 1e-9},
                    'a competitor with a self-perception in (b_hat, b*] fits better')
            ]

            if abs(believed - 0.3) < 1e-9 and actions == [1.0, 2.0, 3.0]:
                expected.append(ExpectedAssertion('mixed_component', Provenance.DERIVED, {'support': ['2', '3'], 'low': 0.45,
                    'high': 0.7, 'tolerance': 0.05}, 'efforts 2 and 3 mixed at omega = 2.5'))

        return Scenario(
            name = self.name,
            problem = problem,
            models = {'theta': theta},
            initial = 'theta',
            priors = {'theta': Belief.uniform(theta)},
            family = family,
            alpha = float(parameters['alpha']),
            assume_convergence = True,
            expected = expected,
            notes = ['The effort cost makes the payoff concave in effort; the output itself is linear in it.']
        )
