#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Callable, Dict, Optional, Sequence, Tuple

from ..engine.env import Gaussian, OutcomeDistribution, Product
from ..engine.errors import ScenarioError
from ..engine.model import KernelFn, Point, QFamily

"""
    Named parametric kernels and membership predicates. A q-family only
    stores the registry name of its kernel (plus numeric parameters) so
    that it can be written to and read back from a scenario file.

    A kernel factory receives the parameter dictionary and returns a
    function (action value, parameter point) -> outcome distribution.
"""

def _overconfidence_signal(parameters : Dict[str, float]) -> KernelFn:

    # Output (a + b) * omega plus a unit noise, and a signal b ** 2 about one's own ability
    output_variance = parameters.get('output_variance', 1.0)
    signal_variance = parameters.get('signal_variance', 2.0)

    def kernel(action : float, point : Point) -> OutcomeDistribution:

        b, omega = point

        return Product((Gaussian((action + b) * omega, output_variance), Gaussian(b * b, signal_variance)))

    return kernel

def _investment(parameters : Dict[str, float]) -> KernelFn:

    # Actions 1 .. N are risky assets returning b + omega_n, action N + 1 is the safe asset
    risky = int(parameters['risky_assets'])
    safe_return = parameters['safe_return']
    variance = parameters.get('variance', 1.0)

    def kernel(action : float, point : Point) -> OutcomeDistribution:

        if int(action) > risky:
            return Gaussian(safe_return, variance)

        return Gaussian(point[0] + point[int(action)], variance)

    return kernel

def _team(parameters : Dict[str, float]) -> KernelFn:

    variance = parameters.get('variance', 1.0)

    def kernel(action : float, point : Point) -> OutcomeDistribution:

        b, omega = point

        return Gaussian((action + b) * omega, variance)

    return kernel

KERNEL_FACTORIES : Dict[str, Callable[[Dict[str, float]], KernelFn]] = {
    'overconfidence_signal': _overconfidence_signal,
    'investment': _investment,
    'team': _team
}

PREDICATES : Dict[str, Callable[[Point], bool]] = {
    'b_at_least_omega': lambda point: point[0] >= point[1] - 1e-12
}

def make_kernel(reference : str, parameters : Dict[str, float]) -> KernelFn:

    if reference not in KERNEL_FACTORIES:
        raise ScenarioError('Unknown kernel "%s" (known: %s)' % (reference, ', '.join(sorted(KERNEL_FACTORIES))))

    try:
        return KERNEL_FACTORIES[reference](dict(parameters))
    except KeyError as missing:
        raise ScenarioError('Kernel "%s" requires the parameter %s' % (reference, missing))

def make_predicate(reference : str) -> Optional[Callable[[Point], bool]]:

    if not reference:
        return None

    if reference not in PREDICATES:
        raise ScenarioError('Unknown family predicate "%s" (known: %s)' % (reference, ', '.join(sorted(PREDICATES))))

    return PREDICATES[reference]

def make_family(kernel_ref : str, kernel_params : Dict[str, float], lows : Sequence[float], highs : Sequence[float],
                steps : Sequence[float], predicate_ref : str = '') -> QFamily:

    """
        A q-family over the regular grid of a box, optionally restricted by
        a named predicate.
    """

    kernel_params = {key: float(value) for key, value in kernel_params.items()}

    return QFamily.from_box(make_kernel(kernel_ref, kernel_params), lows, highs, steps, make_predicate(predicate_ref),
        kernel_ref = kernel_ref, kernel_params = tuple(sorted(kernel_params.items())), predicate_ref = predicate_ref)

def family_arguments(family : QFamily) -> Tuple[str, Dict[str, float], Point, Point, Tuple[float, ...], str]:

    if not family.kernel_ref or family.box is None:
        raise ScenarioError('Only families built from a named kernel over a box can be serialized')

    return family.kernel_ref, dict(family.kernel_params), family.box[0], family.box[1], family.steps, family.predicate_ref
