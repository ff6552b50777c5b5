#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, List
from itertools import product

from scipy.optimize import brentq
import numpy as np

from ..engine.env import DecisionProblem, Gaussian, LinearInOutcome
from ..engine.errors import ScenarioError
from ..engine.model import Belief
from ._base_scenario import BaseScenario, ExpectedAssertion, Provenance, Scenario, model_from_kernel
from .kernels import make_family

"""
    An investor picks one of N risky assets or a safe one each period and
    earns the return. Risky asset n returns g(b, omega_n) = b + omega_n
    plus a unit normal noise, where b is a market factor and omega_n an
    asset-specific factor; the safe asset returns G, modelled with the
    same unit noise under the truth and under every model.

    The investor is dogmatic about the market factor (b_hat) and learns
    the asset factors over a grid. Two thresholds split the misperceptions:
    below beta_low (g(beta_low, omega_max) = G) the safe asset is strictly
    optimal whatever the asset factors, above beta_high
    (g(beta_high, omega_min) = g*) every risky asset is expected to beat
    the best true return g*.
"""

def market_thresholds(g, safe_return : float, best_return : float, omega_low : float, omega_high : float,
                      b_low : float, b_high : float) -> Dict[str, float]:

    try:
        return {
            'beta_low': brentq(lambda b: g(b, omega_high) - safe_return, b_low, b_high),
            'beta_high': brentq(lambda b: g(b, omega_low) - best_return, b_low, b_high)
        }
    except ValueError:
        raise ScenarioError('The market factor range [%g, %g] does not bracket both thresholds' % (b_low, b_high))

class Investment(BaseScenario):

    name = 'investment'
    description = 'Investor with a dogmatic market view; pessimism persists, extreme optimism does not'

    defaults = {
        'believed_market': -1.0,
        'true_market': 1.0,
        'true_factors': [0.5, 1.0],
        'safe_return': 1.5,
        'market_range': [-2.0, 4.0],
        'market_step': 0.25,
        'factor_range': [0.0, 2.0],
        'factor_step': 0.5,
        'alpha': 2.0
    }

    def construct(self, parameters : Dict[str, Any]) -> Scenario:

        believed, true_market = float(parameters['believed_market']), float(parameters['true_market'])
        true_factors = [float(value) for value in parameters['true_factors']]
        safe_return = float(parameters['safe_return'])
        b_low, b_high = [float(value) for value in parameters['market_range']]
        omega_low, omega_high = [float(value) for value in parameters['factor_range']]
        market_step, factor_step = float(parameters['market_step']), float(parameters['factor_step'])

        risky = len(true_factors)

        g = lambda b, omega: b + omega

        best_return = max(g(true_market, omega) for omega in true_factors)

        if not (g(b_high, omega_low) > safe_return and g(b_low, omega_high) < safe_return and best_return > safe_return):
            raise ScenarioError('Returns must satisfy g(b_max, omega_min) > G > g(b_min, omega_max) and g* > G')

        thresholds = market_thresholds(g, safe_return, best_return, omega_low, omega_high, b_low, b_high)

        actions = [float(index) for index in range(1, risky + 2)]

        family = make_family('investment', {'risky_assets': risky, 'safe_return': safe_return},
            [b_low] + [omega_low] * risky, [b_high] + [omega_high] * risky, [market_step] + [factor_step] * risky)

        problem = DecisionProblem(
            actions = tuple(actions),
            true_dgp = tuple(family.kernel_fn(action, (true_market,) + tuple(true_factors)) for action in actions),
            utility = LinearInOutcome(),
            action_names = tuple('asset_%d' % index for index in range(1, risky + 1)) + ('safe',)
        )

        factors = self.factor_grid(believed, true_market, true_factors, omega_low, omega_high, factor_step)

        theta = model_from_kernel('theta', actions, [(believed,) + point for point in product(*factors)], family.kernel_fn)

        expected = [
            ExpectedAssertion('derived_value', Provenance.DERIVED, {'key': 'beta_low', 'equals': safe_return - omega_high,
                'tolerance': 1e-9}, 'g(beta_low, omega_max) = G'),
            ExpectedAssertion('derived_value', Provenance.DERIVED, {'key': 'beta_high', 'equals': best_return - omega_low,
                'tolerance': 1e-9}, 'g(beta_high, omega_min) = g*')
        ]

        if believed < thresholds['beta_low']:

            expected += [
                ExpectedAssertion('pure_equilibrium', Provenance.PAPER, {'action': 'safe', 'sce': True, 'uniformly_quasi_strict': True},
                    'the safe asset is a uniformly strict SCE'),
                ExpectedAssertion('global_verdict', Provenance.PAPER, {'is': 'GloballyRobust'}, 'extreme pessimism is globally robust')
            ]

        elif believed > thresholds['beta_high']:

            expected += [
                ExpectedAssertion('equilibrium_count', Provenance.PAPER, {'kind': 'sce', 'equals': 0}, 'no SCE under extreme optimism'),
                ExpectedAssertion('constrained_verdict', Provenance.PAPER, {'is': 'NotConstrainedLocallyRobust', 'assume_convergence': True,
                    'witness_coordinate': 0, 'witness_low': true_market, 'witness_high': believed},
                    'a competitor with a market factor in [b*, b_hat) wins')
            ]

        else:

            expected.append(ExpectedAssertion('global_verdict', Provenance.PAPER, {'is': 'GloballyRobust', 'paths': 200, 'horizon': 200},
                'mild misperceptions are globally robust'))

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
            derived = thresholds,
            notes = ['The safe return G is observed with the same unit noise as the risky assets.']
        )

    @staticmethod
    def factor_grid(believed : float, true_market : float, true_factors : List[float], omega_low : float,
                    omega_high : float, step : float) -> List[List[float]]:

        """
            Per asset, the regular factor grid plus the factor that matches
            the true mean return under the believed market factor, when it
            lies in range.
        """

        base = [round(value, 10) for value in np.arange(omega_low, omega_high + step / 2, step)]

        grids = []

        for factor in true_factors:

            matching = round(true_market + factor - believed, 10)

            grids.append(sorted(set(base) | ({matching} if omega_low <= matching <= omega_high else set())))

        return grids
