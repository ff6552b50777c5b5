#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union
from dataclasses import dataclass, field
from itertools import product
from logging import debug
from enum import IntEnum
from math import erf, exp, log, pi, sqrt

from numpy.polynomial.hermite_e import hermegauss
from scipy.special import logsumexp
from scipy.integrate import quad
from scipy.stats import norm
import numpy as np

from .errors import InvalidDistributionError, OutcomeMismatchError

"""
    The objective side of the world: outcome distributions, the decision
    problem faced by the agent, flow utilities and random draws.

    Outcomes travel through the library in two shapes:

    * One outcome: an int (atom index) for a categorical space, a float
      for a real line, a tuple of those for a product space.
    * A batch of outcomes: a float array of shape (n, dimension), where
      categorical atoms are stored as integer-valued floats.
"""

PROBABILITY_TOLERANCE = 1e-12

QUADRATURE_HALF_WIDTH = 10.0 # Standard deviations on each side of the mean

QUADRATURE_TOLERANCE = 1e-10

LOG_SQRT_2PI = 0.5 * log(2 * pi)

class SpaceKind(IntEnum):
    categorical = 1
    real = 2
    product = 3

@dataclass(frozen = True)
class OutcomeSpace:

    kind : SpaceKind
    size : int = 0 # Number of atoms, for categorical spaces
    components : Tuple['OutcomeSpace', ...] = ()

    @property
    def dimension(self) -> int:

        return len(self.components) if self.kind == SpaceKind.product else 1

    def describe(self) -> str:

        if self.kind == SpaceKind.categorical:
            return 'categorical(%d)' % self.size
        elif self.kind == SpaceKind.real:
            return 'real'
        return 'product(%s)' % ', '.join(component.describe() for component in self.components)

"""
    Base class for the four distribution variants. Subclasses are frozen
    dataclasses validated at construction.
"""

class OutcomeDistribution:

    @property
    def space(self) -> OutcomeSpace:

        raise NotImplementedError

    @property
    def dimension(self) -> int:

        return self.space.dimension

    @property
    def mean(self) -> np.ndarray:

        raise NotImplementedError

    def log_density_batch(self, outcomes : np.ndarray) -> np.ndarray:

        raise NotImplementedError

    def log_density(self, outcome) -> float:

        return float(self.log_density_batch(outcome_rows(self.space, [outcome]))[0])

@dataclass(frozen = True)
class Categorical(OutcomeDistribution):

    probs : Tuple[float, ...]

    def __post_init__(self):

        probs = tuple(float(value) for value in self.probs)

        object.__setattr__(self, 'probs', probs)

        if not probs:
            raise InvalidDistributionError('A categorical distribution needs at least one atom')

        if min(probs) <= 0:
            raise InvalidDistributionError('Categorical probabilities must be strictly positive: %r' % (probs,))

        if abs(sum(probs) - 1) > PROBABILITY_TOLERANCE:
            raise InvalidDistributionError('Categorical probabilities sum to %.17g instead of 1' % sum(probs))

        object.__setattr__(self, '_log_probs', np.log(np.array(probs)))
        object.__setattr__(self, '_cdf', np.cumsum(probs))

    @property
    def space(self) -> OutcomeSpace:

        return OutcomeSpace(SpaceKind.categorical, len(self.probs))

    @property
    def mean(self) -> np.ndarray:

        return np.array([float(np.dot(np.arange(len(self.probs)), self.probs))])

    def log_density_batch(self, outcomes : np.ndarray) -> np.ndarray:

        atoms = _atom_indices(outcomes[:, 0], len(self.probs))

        return self._log_probs[atoms]

@dataclass(frozen = True)
class Gaussian(OutcomeDistribution):

    mean_value : float
    variance : float

    def __post_init__(self):

        object.__setattr__(self, 'mean_value', float(self.mean_value))
        object.__setattr__(self, 'variance', float(self.variance))

        if not np.isfinite(self.mean_value):
            raise InvalidDistributionError('Gaussian mean must be finite')

        if not self.variance > 0 or not np.isfinite(self.variance):
            raise InvalidDistributionError('Gaussian variance must be positive and finite, got %r' % self.variance)

    @property
    def std(self) -> float:

        return sqrt(self.variance)

    @property
    def space(self) -> OutcomeSpace:

        return OutcomeSpace(SpaceKind.real)

    @property
    def mean(self) -> np.ndarray:

        return np.array([self.mean_value])

    def log_density_batch(self, outcomes : np.ndarray) -> np.ndarray:

        deviation = outcomes[:, 0] - self.mean_value

        return -LOG_SQRT_2PI - 0.5 * log(self.variance) - deviation * deviation / (2 * self.variance)

"""
    Independent components, each over a one-dimensional space. The outcome
    is the vector of the component outcomes.
"""

@dataclass(frozen = True)
class Product(OutcomeDistribution):

    components : Tuple[OutcomeDistribution, ...]

    def __post_init__(self):

        object.__setattr__(self, 'components', tuple(self.components))

        if not self.components:
            raise InvalidDistributionError('A product distribution needs at least one component')

        for component in self.components:
            if not isinstance(component, OutcomeDistribution):
                raise InvalidDistributionError('Product components must be distributions, got %r' % (component,))
            if component.dimension != 1:
                raise InvalidDistributionError('Product components must be one-dimensional')

    @property
    def space(self) -> OutcomeSpace:

        return OutcomeSpace(SpaceKind.product, 0, tuple(component.space for component in self.components))

    @property
    def mean(self) -> np.ndarray:

        return np.concatenate([component.mean for component in self.components])

    def log_density_batch(self, outcomes : np.ndarray) -> np.ndarray:

        if outcomes.shape[1] != len(self.components):
            raise OutcomeMismatchError('Outcome of dimension %d given to a product of %d components' % (outcomes.shape[1], len(self.components)))

        return sum(component.log_density_batch(outcomes[:, index:index + 1])
            for index, component in enumerate(self.components))

@dataclass(frozen = True)
class Mixture(OutcomeDistribution):

    weights : Tuple[float, ...]
    components : Tuple[OutcomeDistribution, ...]

    def __post_init__(self):

        weights = tuple(float(value) for value in self.weights)

        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'components', tuple(self.components))

        if len(weights) != len(self.components) or not weights:
            raise InvalidDistributionError('Mixture weights and components differ in length')

        if min(weights) <= 0 or abs(sum(weights) - 1) > PROBABILITY_TOLERANCE:
            raise InvalidDistributionError('Mixture weights must be positive and sum to 1: %r' % (weights,))

        spaces = {component.space for component in self.components}

        if len(spaces) != 1:
            raise InvalidDistributionError('Mixture components live on different outcome spaces: %s' %
                ', '.join(sorted(space.describe() for space in spaces)))

        object.__setattr__(self, '_log_weights', np.log(np.array(weights)))
        object.__setattr__(self, '_cdf', np.cumsum(weights))

    @property
    def space(self) -> OutcomeSpace:

        return self.components[0].space

    @property
    def mean(self) -> np.ndarray:

        return sum(weight * component.mean for weight, component in zip(self.weights, self.components))

    def log_density_batch(self, outcomes : np.ndarray) -> np.ndarray:

        stacked = np.stack([component.log_density_batch(outcomes) for component in self.components])

        return logsumexp(stacked + self._log_weights[:, None], axis = 0)

def _atom_indices(values : np.ndarray, size : int) -> np.ndarray:

    atoms = np.rint(values).astype(np.int64)

    if atoms.size and (atoms.min() < 0 or atoms.max() >= size):
        raise OutcomeMismatchError('Atom index outside of a categorical space of size %d' % size)

    return atoms

"""
    Conversion between single outcomes and rows of a batch.
"""

def outcome_rows(space : OutcomeSpace, outcomes : Sequence[Any]) -> np.ndarray:

    rows = np.empty((len(outcomes), space.dimension))

    for index, outcome in enumerate(outcomes):

        values = np.atleast_1d(np.asarray(outcome, dtype = float)).ravel()

        if values.shape[0] != space.dimension:
            raise OutcomeMismatchError('Outcome %r does not fit the %s space' % (outcome, space.describe()))

        rows[index] = values

    return rows

def outcome_from_row(space : OutcomeSpace, row : np.ndarray):

    if space.kind == SpaceKind.categorical:
        return int(round(row[0]))
    elif space.kind == SpaceKind.real:
        return float(row[0])

    return tuple(outcome_from_row(component, row[index:index + 1])
        for index, component in enumerate(space.components))

def log_density(dist : OutcomeDistribution, outcome) -> float:

    return dist.log_density(outcome)

"""
    Sampling from pre-drawn noise. Each period of a path owns one selector
    uniform plus one uniform and one standard normal per outcome coordinate.

    Categoricals invert their CDF at the coordinate uniform, Gaussians use
    the coordinate normal, mixtures pick a component with their uniform and
    hand a rescaled uniform down to it. A mixture over a product space uses
    the selector uniform.
"""

@dataclass
class NoiseBlock:

    selector : np.ndarray # (n,)
    uniforms : np.ndarray # (n, dimension)
    normals : np.ndarray # (n, dimension)

    def rows(self, mask) -> 'NoiseBlock':

        return NoiseBlock(self.selector[mask], self.uniforms[mask], self.normals[mask])

def _pick_component(cdf : np.ndarray, weights : Sequence[float], uniforms : np.ndarray):

    chosen = np.minimum(np.searchsorted(cdf, uniforms, side = 'right'), len(cdf) - 1)

    lower = np.concatenate([[0.0], cdf[:-1]])[chosen]

    rescaled = np.clip((uniforms - lower) / np.asarray(weights)[chosen], 0.0, np.nextafter(1.0, 0.0))

    return chosen, rescaled

def _draw_scalar(dist : OutcomeDistribution, uniforms : np.ndarray, normals : np.ndarray) -> np.ndarray:

    if isinstance(dist, Categorical):

        return np.minimum(np.searchsorted(dist._cdf, uniforms, side = 'right'), len(dist.probs) - 1).astype(float)

    elif isinstance(dist, Gaussian):

        return dist.mean_value + dist.std * normals

    elif isinstance(dist, Mixture):

        chosen, rescaled = _pick_component(dist._cdf, dist.weights, uniforms)

        values = np.empty(uniforms.shape[0])

        for index, component in enumerate(dist.components):

            mask = chosen == index

            if mask.any():
                values[mask] = _draw_scalar(component, rescaled[mask], normals[mask])

        return values

    raise InvalidDistributionError('Cannot draw a scalar from %r' % (dist,))

def draw_batch(dist : OutcomeDistribution, noise : NoiseBlock) -> np.ndarray:

    count = noise.selector.shape[0]

    if isinstance(dist, Product):

        return np.column_stack([_draw_scalar(component, noise.uniforms[:, index], noise.normals[:, index])
            for index, component in enumerate(dist.components)]).reshape(count, len(dist.components))

    elif isinstance(dist, Mixture) and dist.space.kind == SpaceKind.product:

        chosen, rescaled = _pick_component(dist._cdf, dist.weights, noise.selector)

        values = np.empty((count, dist.dimension))

        for index, component in enumerate(dist.components):

            mask = chosen == index

            if mask.any():
                values[mask] = draw_batch(component, NoiseBlock(rescaled[mask], noise.uniforms[mask], noise.normals[mask]))

        return values

    return _draw_scalar(dist, noise.uniforms[:, 0], noise.normals[:, 0])[:, None]

def draw_noise(rng : np.random.Generator, count : int, dimension : int) -> NoiseBlock:

    return NoiseBlock(rng.random(count), rng.random((count, dimension)), rng.standard_normal((count, dimension)))

def sample(dist : OutcomeDistribution, rng : np.random.Generator):

    return outcome_from_row(dist.space, draw_batch(dist, draw_noise(rng, 1, dist.dimension))[0])

"""
    Quadrature nodes reproducing expectations under a distribution: exact
    for categoricals, Gauss-Hermite (probabilists' weight) for Gaussians.
"""

def quadrature_nodes(dist : OutcomeDistribution, count : int = 16) -> Tuple[np.ndarray, np.ndarray]:

    if isinstance(dist, Categorical):

        return np.arange(len(dist.probs), dtype = float)[:, None], np.array(dist.probs)

    elif isinstance(dist, Gaussian):

        nodes, weights = hermegauss(count)

        return (dist.mean_value + dist.std * nodes)[:, None], weights / sqrt(2 * pi)

    elif isinstance(dist, Product):

        per_component = [quadrature_nodes(component, count) for component in dist.components]

        points, weights = [], []

        for combination in product(*[range(len(component_weights)) for _, component_weights in per_component]):

            points.append([per_component[axis][0][node, 0] for axis, node in enumerate(combination)])
            weights.append(np.prod([per_component[axis][1][node] for axis, node in enumerate(combination)]))

        return np.array(points), np.array(weights)

    elif isinstance(dist, Mixture):

        parts = [quadrature_nodes(component, count) for component in dist.components]

        return (np.concatenate([points for points, _ in parts]),
            np.concatenate([weight * weights for weight, (_, weights) in zip(dist.weights, parts)]))

    raise InvalidDistributionError('No quadrature rule for %r' % (dist,))

def scalar_bracket(dist : OutcomeDistribution) -> Tuple[float, float]:

    if isinstance(dist, Gaussian):
        return (dist.mean_value - QUADRATURE_HALF_WIDTH * dist.std, dist.mean_value + QUADRATURE_HALF_WIDTH * dist.std)

    elif isinstance(dist, Mixture):
        brackets = [scalar_bracket(component) for component in dist.components]
        return min(low for low, _ in brackets), max(high for _, high in brackets)

    raise InvalidDistributionError('No integration bracket for %r' % (dist,))

def expectation(dist : OutcomeDistribution, function : Callable[[np.ndarray], np.ndarray]) -> Tuple[float, float]:

    """
        Expectation of a vectorized function of outcome rows, with an error
        estimate (0 when the expectation is an exact finite sum).
    """

    space = dist.space

    if space.kind == SpaceKind.categorical:

        atoms = np.arange(space.size, dtype = float)[:, None]

        return float(np.dot(np.exp(dist.log_density_batch(atoms)), function(atoms))), 0.0

    elif space.kind == SpaceKind.real:

        low, high = scalar_bracket(dist)

        value, error = quad(lambda y: float(np.exp(dist.log_density_batch(np.array([[y]])))[0] *
            function(np.array([[y]]))[0]), low, high, epsabs = QUADRATURE_TOLERANCE, epsrel = QUADRATURE_TOLERANCE, limit = 200)

        return value, error

    count = max(6, int(round(4096 ** (1 / space.dimension))))

    points, weights = quadrature_nodes(dist, count)
    coarse_points, coarse_weights = quadrature_nodes(dist, max(3, count // 2))

    value = float(np.dot(weights, function(points)))

    return value, abs(value - float(np.dot(coarse_weights, function(coarse_points))))

"""
    Flow utilities. Every variant evaluates a batch of outcome rows for one
    action and computes its expectation under a distribution.
"""

class UtilityFn:

    def evaluate_batch(self, action_index : int, action_value : float, outcomes : np.ndarray) -> np.ndarray:

        raise NotImplementedError

    def expected(self, action_index : int, action_value : float, dist : OutcomeDistribution) -> float:

        value, error = expectation(dist, lambda rows: self.evaluate_batch(action_index, action_value, rows))

        if error:
            debug('Quadrature error estimate %.3g for the expected utility of action %g' % (error, action_value))

        return value

    def evaluate(self, action_index : int, action_value : float, outcome, space : OutcomeSpace) -> float:

        return float(self.evaluate_batch(action_index, action_value, outcome_rows(space, [outcome]))[0])

@dataclass(frozen = True)
class TableUtility(UtilityFn):

    rows : Tuple[Tuple[float, ...], ...] # One row per action, one column per atom

    def __post_init__(self):

        object.__setattr__(self, 'rows', tuple(tuple(float(value) for value in row) for row in self.rows))

        if len({len(row) for row in self.rows}) > 1:
            raise InvalidDistributionError('Utility table rows differ in length')

    def evaluate_batch(self, action_index, action_value, outcomes):

        row = np.array(self.rows[action_index])

        return row[_atom_indices(outcomes[:, 0], len(row))]

    def expected(self, action_index, action_value, dist):

        if dist.space.kind != SpaceKind.categorical or dist.space.size != len(self.rows[action_index]):
            raise OutcomeMismatchError('Utility table has %d columns for a %s space' % (len(self.rows[action_index]), dist.space.describe()))

        atoms = np.arange(dist.space.size, dtype = float)[:, None]

        return float(np.dot(np.exp(dist.log_density_batch(atoms)), self.rows[action_index]))

@dataclass(frozen = True)
class LinearInOutcome(UtilityFn):

    coordinate : int = 0
    action_cost : Tuple[float, ...] = () # Indexed by action, empty means no cost

    def __post_init__(self):

        object.__setattr__(self, 'action_cost', tuple(float(value) for value in self.action_cost))

    def cost(self, action_index : int) -> float:

        return self.action_cost[action_index] if self.action_cost else 0.0

    def evaluate_batch(self, action_index, action_value, outcomes):

        return outcomes[:, self.coordinate] - self.cost(action_index)

    def expected(self, action_index, action_value, dist):

        return float(dist.mean[self.coordinate]) - self.cost(action_index)

def folded_normal_mean(mean : float, std : float) -> float:

    return std * sqrt(2 / pi) * exp(-mean * mean / (2 * std * std)) + mean * (1 - 2 * norm.cdf(-mean / std))

def _expected_absolute(dist : OutcomeDistribution, coordinate : int) -> float:

    if isinstance(dist, Gaussian):
        return folded_normal_mean(dist.mean_value, dist.std)

    elif isinstance(dist, Categorical):
        return float(np.dot(np.arange(len(dist.probs)), dist.probs))

    elif isinstance(dist, Product):
        return _expected_absolute(dist.components[coordinate], 0)

    return sum(weight * _expected_absolute(component, coordinate) for weight, component in zip(dist.weights, dist.components))

@dataclass(frozen = True)
class AbsOutcome(UtilityFn):

    coordinate : int = 0

    def evaluate_batch(self, action_index, action_value, outcomes):

        return np.abs(outcomes[:, self.coordinate])

    def expected(self, action_index, action_value, dist):

        return _expected_absolute(dist, self.coordinate)

def _scaled_outcome(parameters : Dict[str, float], action_value : float, outcomes : np.ndarray) -> np.ndarray:

    return parameters.get('scale', 1.0) * action_value * outcomes[:, int(parameters.get('coordinate', 0))]

def _quadratic_cost(parameters : Dict[str, float], action_value : float, outcomes : np.ndarray) -> np.ndarray:

    return outcomes[:, int(parameters.get('coordinate', 0))] - parameters.get('cost', 0.5) * action_value ** 2

CUSTOM_UTILITIES : Dict[str, Callable[[Dict[str, float], float, np.ndarray], np.ndarray]] = {
    'scaled_outcome': _scaled_outcome,
    'quadratic_cost': _quadratic_cost
}

@dataclass(frozen = True)
class CustomUtility(UtilityFn):

    tag : str
    parameters : Tuple[Tuple[str, float], ...] = ()

    def __post_init__(self):

        if self.tag not in CUSTOM_UTILITIES:
            raise InvalidDistributionError('Unknown custom utility "%s" (known: %s)' % (self.tag, ', '.join(sorted(CUSTOM_UTILITIES))))

        object.__setattr__(self, 'parameters', tuple(sorted((str(key), float(value)) for key, value in dict(self.parameters).items())))

    def evaluate_batch(self, action_index, action_value, outcomes):

        return CUSTOM_UTILITIES[self.tag](dict(self.parameters), action_value, outcomes)

"""
    The objective decision problem: a finite ordered list of actions (their
    numeric values feed kernels and utilities), the true outcome
    distribution of each action, the flow utility and the discount factor.
"""

@dataclass(frozen = True)
class DecisionProblem:

    actions : Tuple[float, ...]
    true_dgp : Tuple[OutcomeDistribution, ...]
    utility : UtilityFn
    discount : float = 0.0
    action_names : Tuple[str, ...] = ()

    def __post_init__(self):

        object.__setattr__(self, 'actions', tuple(float(value) for value in self.actions))
        object.__setattr__(self, 'true_dgp', tuple(self.true_dgp))

        if not self.actions:
            raise InvalidDistributionError('A decision problem needs at least one action')

        if len(set(self.actions)) != len(self.actions):
            raise InvalidDistributionError('Actions must be distinct: %r' % (self.actions,))

        if len(self.true_dgp) != len(self.actions):
            raise InvalidDistributionError('The true DGP must be given for each of the %d actions' % len(self.actions))

        if len({dist.space for dist in self.true_dgp}) != 1:
            raise InvalidDistributionError('All actions must share one outcome space')

        if not 0 <= self.discount < 1:
            raise InvalidDistributionError('Discount factor must lie in [0, 1), got %r' % self.discount)

        if not self.action_names:
            object.__setattr__(self, 'action_names', tuple('%g' % value for value in self.actions))
        elif len(self.action_names) != len(self.actions):
            raise InvalidDistributionError('One name per action is required')

        if isinstance(self.utility, TableUtility):
            if len(self.utility.rows) != len(self.actions) or self.outcome_space.kind != SpaceKind.categorical or \
               any(len(row) != self.outcome_space.size for row in self.utility.rows):
                raise InvalidDistributionError('Utility table must have one row per action and one column per atom')

    @property
    def outcome_space(self) -> OutcomeSpace:

        return self.true_dgp[0].space

    @property
    def action_count(self) -> int:

        return len(self.actions)

    def index_of(self, action) -> int:

        """
            Action index from either a numeric action value or an action name.
        """

        if isinstance(action, str) and action in self.action_names:
            return self.action_names.index(action)

        try:
            return self.actions.index(float(action))
        except (ValueError, TypeError):
            raise InvalidDistributionError('Unknown action %r' % (action,))

    def expected_utility(self, action_index : int, dist : OutcomeDistribution) -> float:

        return self.utility.expected(action_index, self.actions[action_index], dist)

def expected_utility(problem : DecisionProblem, action_index : int, dist : OutcomeDistribution) -> float:

    return problem.expected_utility(action_index, dist)

def expected_true_utility(problem : DecisionProblem, action_index : int) -> float:

    return problem.expected_utility(action_index, problem.true_dgp[action_index])
