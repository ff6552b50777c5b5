#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple
from dataclasses import dataclass, field
from itertools import product
from logging import debug
from math import log, pi, sqrt

from scipy.spatial.distance import cdist
from scipy.special import logsumexp
import numpy as np

from .env import OutcomeDistribution, Categorical, Gaussian, Product, Mixture, DecisionProblem, \
    SpaceKind, LOG_SQRT_2PI, expectation, outcome_rows
from .errors import InvalidModelError, InvalidBeliefError, OutcomeMismatchError

"""
    The subjective side: models as finite parameter sets with a kernel,
    beliefs over those parameters, likelihood bookkeeping in log space,
    Kullback-Leibler machinery and the constructors of competing models
    used to falsify robustness claims.
"""

PROBABILITY_TOLERANCE = 1e-12

MINIMIZER_TOLERANCE = 1e-9

STRUCTURAL_TOLERANCE = 1e-12

SCE_KL_TOLERANCE = 1e-10

PROKHOROV_MAX_ATOMS = 16

Point = Tuple[float, ...]

def as_point(value) -> Point:

    return tuple(float(coordinate) for coordinate in np.atleast_1d(np.asarray(value, dtype = float)).ravel())

"""
    The log-densities of one action's kernels, stacked over the parameters
    of a model so that a batch of outcomes is evaluated against every
    parameter at once. Returns arrays of shape (outcomes, parameters).
"""

class StackedKernel:

    def __init__(self, dists : Sequence[OutcomeDistribution]):

        self.dists = tuple(dists)

        self.slots : List['StackedKernel'] = []

        if all(isinstance(dist, Gaussian) for dist in self.dists):

            self.kind = 'gaussian'
            self.means = np.array([dist.mean_value for dist in self.dists])
            self.variances = np.array([dist.variance for dist in self.dists])
            self.offsets = -LOG_SQRT_2PI - 0.5 * np.log(self.variances)

        elif all(isinstance(dist, Categorical) for dist in self.dists) and \
             len({len(dist.probs) for dist in self.dists}) == 1:

            self.kind = 'categorical'
            self.log_probs = np.log(np.array([dist.probs for dist in self.dists]))

        elif all(isinstance(dist, Product) for dist in self.dists) and \
             len({len(dist.components) for dist in self.dists}) == 1:

            self.kind = 'product'
            self.slots = [StackedKernel([dist.components[index] for dist in self.dists])
                for index in range(len(self.dists[0].components))]

        else:

            self.kind = 'generic'

    def log_density_batch(self, outcomes : np.ndarray) -> np.ndarray:

        if self.kind == 'gaussian':

            deviation = outcomes[:, :1] - self.means[None, :]

            return self.offsets[None, :] - deviation * deviation / (2 * self.variances[None, :])

        elif self.kind == 'categorical':

            atoms = np.rint(outcomes[:, 0]).astype(np.int64)

            if atoms.size and (atoms.min() < 0 or atoms.max() >= self.log_probs.shape[1]):
                raise OutcomeMismatchError('Atom index outside of a categorical space of size %d' % self.log_probs.shape[1])

            return self.log_probs[:, atoms].T

        elif self.kind == 'product':

            if outcomes.shape[1] != len(self.slots):
                raise OutcomeMismatchError('Outcome of dimension %d given to a product of %d components' % (outcomes.shape[1], len(self.slots)))

            return sum(slot.log_density_batch(outcomes[:, index:index + 1]) for index, slot in enumerate(self.slots))

        return np.column_stack([dist.log_density_batch(outcomes) for dist in self.dists])

"""
    A subjective model: a finite, ordered set of distinct parameter points
    and a kernel giving, for each action index and parameter index, the
    outcome distribution the agent believes in.
"""

@dataclass(frozen = True, eq = False)
class SubjectiveModel:

    id : str
    parameters : Tuple[Point, ...]
    kernel : Tuple[Tuple[OutcomeDistribution, ...], ...] # kernel[action index][parameter index]

    def __post_init__(self):

        parameters = tuple(as_point(point) for point in self.parameters)
        kernel = tuple(tuple(row) for row in self.kernel)

        object.__setattr__(self, 'parameters', parameters)
        object.__setattr__(self, 'kernel', kernel)

        if not parameters:
            raise InvalidModelError('Model "%s" has no parameters' % self.id)

        if len({len(point) for point in parameters}) != 1:
            raise InvalidModelError('Parameters of model "%s" differ in dimension' % self.id)

        if len(set(parameters)) != len(parameters):
            raise InvalidModelError('Parameters of model "%s" are not distinct' % self.id)

        if not kernel or any(len(row) != len(parameters) for row in kernel):
            raise InvalidModelError('Kernel of model "%s" must give one distribution per action and parameter' % self.id)

        spaces = {dist.space for row in kernel for dist in row}

        if len(spaces) != 1:
            raise InvalidModelError('Kernel distributions of model "%s" live on different outcome spaces' % self.id)

        object.__setattr__(self, '_stacks', {})
        object.__setattr__(self, '_kl_tables', {})
        object.__setattr__(self, '_payoff_tables', {})

    def __eq__(self, other):

        return isinstance(other, SubjectiveModel) and (self.id, self.parameters, self.kernel) == \
            (other.id, other.parameters, other.kernel)

    def __hash__(self):

        return hash((self.id, self.parameters))

    @property
    def parameter_count(self) -> int:

        return len(self.parameters)

    @property
    def action_count(self) -> int:

        return len(self.kernel)

    @property
    def space(self):

        return self.kernel[0][0].space

    def index_of(self, point) -> int:

        point = as_point(point)

        for index, candidate in enumerate(self.parameters):
            if np.allclose(candidate, point, rtol = 0, atol = 1e-9):
                return index

        raise InvalidModelError('Point %r is not a parameter of model "%s"' % (point, self.id))

    def stacked(self, action_index : int) -> StackedKernel:

        if action_index not in self._stacks:
            self._stacks[action_index] = StackedKernel(self.kernel[action_index])

        return self._stacks[action_index]

    def check_against(self, problem : DecisionProblem):

        if self.action_count != problem.action_count:
            raise InvalidModelError('Model "%s" has a kernel for %d actions, the problem has %d' %
                (self.id, self.action_count, problem.action_count))

        if self.space != problem.outcome_space:
            raise InvalidModelError('Model "%s" predicts outcomes in a %s space, the problem has a %s space' %
                (self.id, self.space.describe(), problem.outcome_space.describe()))

def check_model(problem : DecisionProblem, model : SubjectiveModel):

    model.check_against(problem)

"""
    A probability vector over the parameters of one model.
"""

@dataclass(frozen = True)
class Belief:

    model_id : str
    probs : Tuple[float, ...]

    def __post_init__(self):

        probs = tuple(float(value) for value in self.probs)

        object.__setattr__(self, 'probs', probs)

        if not probs or min(probs) < 0 or abs(sum(probs) - 1) > PROBABILITY_TOLERANCE:
            raise InvalidBeliefError('Belief over "%s" is not a probability vector: %r' % (self.model_id, probs))

    @classmethod
    def uniform(cls, model : SubjectiveModel) -> 'Belief':

        return cls(model.id, (1 / model.parameter_count,) * model.parameter_count)

    @classmethod
    def point_mass(cls, model : SubjectiveModel, index : int) -> 'Belief':

        return cls(model.id, tuple(float(position == index) for position in range(model.parameter_count)))

    @classmethod
    def from_weights(cls, model_id : str, weights : Sequence[float]) -> 'Belief':

        weights = np.asarray(weights, dtype = float)

        return cls(model_id, tuple(weights / weights.sum()))

    @property
    def array(self) -> np.ndarray:

        return np.array(self.probs)

    def support(self, tolerance : float = 0.0) -> Tuple[int, ...]:

        return tuple(index for index, value in enumerate(self.probs) if value > tolerance)

    def mass_on(self, indices : Iterable[int]) -> float:

        return float(sum(self.probs[index] for index in set(indices)))

def check_prior(model : SubjectiveModel, prior : Belief):

    if prior.model_id != model.id:
        raise InvalidBeliefError('Prior for "%s" given to model "%s"' % (prior.model_id, model.id))

    if len(prior.probs) != model.parameter_count:
        raise InvalidBeliefError('Prior for "%s" has %d entries, the model has %d parameters' %
            (model.id, len(prior.probs), model.parameter_count))

    if min(prior.probs) <= 0:
        raise InvalidBeliefError('Prior for "%s" must have full support: %r' % (model.id, prior.probs))

def bayes_update(model : SubjectiveModel, belief : Belief, action_index : int, outcome) -> Belief:

    log_posterior = _safe_log(belief.array) + model.stacked(action_index).log_density_batch(outcome_rows(model.space, [outcome]))[0]

    return Belief(model.id, tuple(np.exp(log_posterior - logsumexp(log_posterior))))

def _safe_log(values : np.ndarray) -> np.ndarray:

    with np.errstate(divide = 'ignore'):
        return np.log(values)

"""
    Running per-parameter log-likelihoods plus the log-prior. The prior
    weighted likelihood l_t and the posterior are read off at any time.
"""

class LikelihoodAccumulator:

    def __init__(self, model : SubjectiveModel, prior : Belief):

        check_prior(model, prior)

        self.model = model

        self.log_prior = np.log(prior.array)

        self.sums = np.zeros(model.parameter_count)

        self.observations = 0

    def observe(self, action_index : int, outcome):

        self.sums += self.model.stacked(action_index).log_density_batch(outcome_rows(self.model.space, [outcome]))[0]

        self.observations += 1

    @property
    def log_likelihood(self) -> float:

        return float(logsumexp(self.log_prior + self.sums))

    def posterior(self) -> Belief:

        joint = self.log_prior + self.sums

        return Belief(self.model.id, tuple(np.exp(joint - logsumexp(joint))))

def log_likelihood(model : SubjectiveModel, prior : Belief, history : Sequence[Tuple[int, Any]],
                   recursive : bool = False) -> float:

    """
        Log of the prior-weighted product likelihood of a history of
        (action index, outcome) pairs.

        The direct form sums per-parameter log-densities and combines them
        once. The recursive form adds, period by period, the log of the
        predictive density under the current posterior.
    """

    if not recursive:

        accumulator = LikelihoodAccumulator(model, prior)

        for action_index, outcome in history:
            accumulator.observe(action_index, outcome)

        return accumulator.log_likelihood

    check_prior(model, prior)

    log_belief = np.log(prior.array)
    total = 0.0

    for action_index, outcome in history:

        joint = log_belief + model.stacked(action_index).log_density_batch(outcome_rows(model.space, [outcome]))[0]

        predictive = logsumexp(joint)

        total += predictive
        log_belief = joint - predictive

    return float(total)

"""
    Kullback-Leibler divergence D(p || q) between two distributions on one
    outcome space.
"""

def kl_divergence(p : OutcomeDistribution, q : OutcomeDistribution) -> float:

    if p.space != q.space:
        raise OutcomeMismatchError('Cannot compare a %s distribution with a %s one' % (p.space.describe(), q.space.describe()))

    if p.space.kind == SpaceKind.categorical:

        atoms = np.arange(p.space.size, dtype = float)[:, None]

        log_p = p.log_density_batch(atoms)

        value = float(np.dot(np.exp(log_p), log_p - q.log_density_batch(atoms)))

    elif isinstance(p, Gaussian) and isinstance(q, Gaussian):

        value = 0.5 * log(q.variance / p.variance) + (p.variance + (p.mean_value - q.mean_value) ** 2) / (2 * q.variance) - 0.5

    elif isinstance(p, Product) and isinstance(q, Product):

        value = sum(kl_divergence(left, right) for left, right in zip(p.components, q.components))

    else:

        value, error = expectation(p, lambda rows: p.log_density_batch(rows) - q.log_density_batch(rows))

        debug('KL divergence by quadrature: %.12g (error estimate %.3g)' % (value, error))

    return max(value, 0.0)

def kl_table(problem : DecisionProblem, model : SubjectiveModel) -> np.ndarray:

    """
        D(Q*(.|a) || q(.|a, w)) for every action (rows) and parameter
        (columns). Cached per model and problem.
    """

    key = id(problem)

    cached = model._kl_tables.get(key)

    if cached is None or cached[0] is not problem:

        model.check_against(problem)

        table = np.array([[kl_divergence(problem.true_dgp[action_index], dist)
            for dist in model.kernel[action_index]]
            for action_index in range(problem.action_count)])

        table.setflags(write = False)

        model._kl_tables[key] = cached = (problem, table)

    return cached[1]

def as_strategy_vector(problem : DecisionProblem, sigma) -> np.ndarray:

    sigma = np.asarray(getattr(sigma, 'probs', sigma), dtype = float)

    if sigma.shape != (problem.action_count,) or sigma.min() < -PROBABILITY_TOLERANCE or abs(sigma.sum() - 1) > 1e-9:
        raise InvalidBeliefError('Not a strategy over %d actions: %r' % (problem.action_count, sigma))

    return sigma

def weighted_kl(problem : DecisionProblem, model : SubjectiveModel, sigma, omega_index : Optional[int] = None):

    """
        The sigma-weighted divergence for one parameter, or for all of them
        when no index is given.
    """

    values = as_strategy_vector(problem, sigma) @ kl_table(problem, model)

    return float(values[omega_index]) if omega_index is not None else values

def kl_minimizers(problem : DecisionProblem, model : SubjectiveModel, sigma,
                  tolerance : float = MINIMIZER_TOLERANCE) -> Tuple[int, ...]:

    values = weighted_kl(problem, model, sigma)

    return tuple(int(index) for index in np.flatnonzero(values <= values.min() + tolerance))

"""
    Structural equality of distributions: same variant and parameters
    within a tolerance, recursing into products and mixtures. Falls back to
    a vanishing divergence across variants.
"""

def same_distribution(p : OutcomeDistribution, q : OutcomeDistribution,
                      tolerance : float = STRUCTURAL_TOLERANCE) -> bool:

    if type(p) is type(q):

        if isinstance(p, Categorical):
            return len(p.probs) == len(q.probs) and np.allclose(p.probs, q.probs, rtol = 0, atol = tolerance)

        elif isinstance(p, Gaussian):
            return abs(p.mean_value - q.mean_value) <= tolerance and abs(p.variance - q.variance) <= tolerance

        elif isinstance(p, Product):
            if len(p.components) == len(q.components) and all(same_distribution(left, right, tolerance)
                    for left, right in zip(p.components, q.components)):
                return True

        elif isinstance(p, Mixture):
            if len(p.components) == len(q.components) and np.allclose(p.weights, q.weights, rtol = 0, atol = tolerance) and \
               all(same_distribution(left, right, tolerance) for left, right in zip(p.components, q.components)):
                return True

    if p.space != q.space:
        return False

    return kl_divergence(p, q) < SCE_KL_TOLERANCE

"""
    Moments of density ratios under the true distribution of an action,
    for a kernel function defined on a parameter domain.
"""

KernelFn = Callable[[float, Point], OutcomeDistribution]

def _gaussian_ratio_moment(truth : Gaussian, numerator : Gaussian, denominator : Gaussian, d : float) -> float:

    quadratic = -1 / (2 * truth.variance) - d / (2 * numerator.variance) + d / (2 * denominator.variance)

    if quadratic >= 0:
        return float('inf')

    linear = truth.mean_value / truth.variance + d * numerator.mean_value / numerator.variance - \
        d * denominator.mean_value / denominator.variance

    constant = -truth.mean_value ** 2 / (2 * truth.variance) - d * numerator.mean_value ** 2 / (2 * numerator.variance) + \
        d * denominator.mean_value ** 2 / (2 * denominator.variance) - 0.5 * log(2 * pi * truth.variance) - \
        0.5 * d * log(numerator.variance / denominator.variance)

    exponent = constant - linear * linear / (4 * quadratic)

    return float(np.exp(exponent) * sqrt(pi / -quadratic))

def ratio_moment(truth : OutcomeDistribution, numerator : OutcomeDistribution,
                 denominator : OutcomeDistribution, d : float) -> float:

    """
        E_truth[(numerator / denominator) ** d]; +inf when the integral
        diverges.
    """

    if d <= 0:
        raise InvalidModelError('Moment order must be positive, got %r' % d)

    if truth.space.kind == SpaceKind.categorical:

        atoms = np.arange(truth.space.size, dtype = float)[:, None]

        return float(np.dot(np.exp(truth.log_density_batch(atoms)),
            np.exp(d * (numerator.log_density_batch(atoms) - denominator.log_density_batch(atoms)))))

    elif all(isinstance(dist, Gaussian) for dist in (truth, numerator, denominator)):

        return _gaussian_ratio_moment(truth, numerator, denominator, d)

    elif all(isinstance(dist, Product) for dist in (truth, numerator, denominator)):

        return float(np.prod([ratio_moment(*components, d)
            for components in zip(truth.components, numerator.components, denominator.components)]))

    value, error = expectation(truth, lambda rows: np.exp(d * (numerator.log_density_batch(rows) - denominator.log_density_batch(rows))))

    return value if np.isfinite(value) else float('inf')

def dominance_moment(problem : DecisionProblem, kernel_fn : KernelFn, action_index : int,
                     omega_prime, omega, d : float) -> float:

    action = problem.actions[action_index]

    if as_point(omega_prime) == as_point(omega):
        return 1.0

    return ratio_moment(problem.true_dgp[action_index], kernel_fn(action, as_point(omega_prime)),
        kernel_fn(action, as_point(omega)), d)

def log_ratio_mean(problem : DecisionProblem, kernel_fn : KernelFn, action_index : int, omega_prime, omega) -> float:

    """
        E_truth[ln q(y|a, w') / q(y|a, w)], from the two divergences.
    """

    action, truth = problem.actions[action_index], problem.true_dgp[action_index]

    return kl_divergence(truth, kernel_fn(action, as_point(omega))) - kl_divergence(truth, kernel_fn(action, as_point(omega_prime)))

"""
    Distances between distributions and between parameter sets.
"""

def prokhorov_categorical(p, q) -> float:

    """
        Levy-Prokhorov distance between two distributions on a shared set
        of at most 16 atoms under the discrete metric, by enumerating every
        event.
    """

    p = np.asarray(getattr(p, 'probs', p), dtype = float)
    q = np.asarray(getattr(q, 'probs', q), dtype = float)

    if p.shape != q.shape or p.ndim != 1:
        raise OutcomeMismatchError('Distributions over different atom sets: %d vs %d atoms' % (p.size, q.size))

    if p.size > PROKHOROV_MAX_ATOMS:
        raise OutcomeMismatchError('Event enumeration is limited to %d atoms, got %d' % (PROKHOROV_MAX_ATOMS, p.size))

    events = (np.arange(2 ** p.size)[:, None] >> np.arange(p.size)[None, :]) & 1

    gap = float(np.abs(events @ (p - q)).max())

    return min(1.0, gap)

def _point_array(points) -> np.ndarray:

    points = np.asarray(points, dtype = float)

    return points.reshape(-1, 1) if points.ndim <= 1 else points

def hausdorff_params(first, second) -> float:

    """
        Symmetric Hausdorff distance between two finite parameter sets. A
        flat sequence is read as a set of scalar parameters.
    """

    first, second = _point_array(first), _point_array(second)

    if first.size == 0 or second.size == 0:
        raise InvalidModelError('Hausdorff distance needs two nonempty parameter sets')

    distances = cdist(first, second)

    return float(max(distances.min(axis = 1).max(), distances.min(axis = 0).max()))

"""
    Competing-model constructors.
"""

def convex_mix_model(model : SubjectiveModel, problem : DecisionProblem, eps : float,
                     model_id : Optional[str] = None) -> SubjectiveModel:

    """
        Same parameters; every kernel replaced by (1 - eps) q(.|a, w) +
        eps Q*(.|a). With eps = 1 the kernel is the truth itself.
    """

    if not 0 < eps <= 1:
        raise InvalidModelError('Mixing weight must lie in (0, 1], got %r' % eps)

    model.check_against(problem)

    def mix(dist : OutcomeDistribution, truth : OutcomeDistribution) -> OutcomeDistribution:

        if eps == 1:
            return truth

        if isinstance(dist, Mixture):
            return Mixture(tuple((1 - eps) * weight for weight in dist.weights) + (eps,), dist.components + (truth,))

        return Mixture((1 - eps, eps), (dist, truth))

    return SubjectiveModel(model_id or '%s~mix' % model.id, model.parameters,
        tuple(tuple(mix(dist, problem.true_dgp[action_index]) for dist in row)
            for action_index, row in enumerate(model.kernel)))

def augment_model(model : SubjectiveModel, extra : Sequence[Tuple[Any, Sequence[OutcomeDistribution]]],
                  model_id : Optional[str] = None) -> SubjectiveModel:

    if not extra:
        return model

    parameters = list(model.parameters)
    kernel = [list(row) for row in model.kernel]

    for point, dists in extra:

        point = as_point(point)

        if point in parameters:
            raise InvalidModelError('Point %r is already a parameter of model "%s"' % (point, model.id))

        if len(dists) != model.action_count:
            raise InvalidModelError('Added point %r needs one distribution per action' % (point,))

        parameters.append(point)

        for action_index, dist in enumerate(dists):
            kernel[action_index].append(dist)

    return SubjectiveModel(model_id or '%s+' % model.id, tuple(parameters), tuple(tuple(row) for row in kernel))

def restrict_model(model : SubjectiveModel, indices : Sequence[int], model_id : Optional[str] = None) -> SubjectiveModel:

    indices = sorted(set(indices))

    if not indices:
        raise InvalidModelError('Cannot restrict model "%s" to no parameters' % model.id)

    return SubjectiveModel(model_id or model.id, tuple(model.parameters[index] for index in indices),
        tuple(tuple(row[index] for index in indices) for row in model.kernel))

"""
    A q-family: one parametric kernel over a finite grid of parameter
    points, usually generated from a box with per-axis steps and a
    membership predicate. Models of the family are finite subsets of the
    grid. The registry references let families be written back to JSON.
"""

@dataclass(frozen = True, eq = False)
class QFamily:

    kernel_fn : KernelFn
    points : Tuple[Point, ...]
    steps : Tuple[float, ...]
    kernel_ref : str = ''
    kernel_params : Tuple[Tuple[str, float], ...] = ()
    predicate_ref : str = ''
    box : Optional[Tuple[Point, Point]] = None

    def __post_init__(self):

        object.__setattr__(self, 'points', tuple(as_point(point) for point in self.points))
        object.__setattr__(self, 'steps', tuple(float(step) for step in self.steps))

        if not self.points:
            raise InvalidModelError('A q-family needs a nonempty parameter grid')

        if len({len(point) for point in self.points}) != 1 or len(self.points[0]) != len(self.steps):
            raise InvalidModelError('Family grid points and steps differ in dimension')

        object.__setattr__(self, '_array', np.array(self.points))

    @classmethod
    def from_box(cls, kernel_fn : KernelFn, lows : Sequence[float], highs : Sequence[float], steps : Sequence[float],
                 predicate : Optional[Callable[[Point], bool]] = None, **references) -> 'QFamily':

        axes = []

        for low, high, step in zip(lows, highs, steps):

            if step <= 0 or high < low:
                raise InvalidModelError('Invalid family box axis [%g, %g] with step %g' % (low, high, step))

            count = int(round((high - low) / step)) + 1

            axes.append([round(low + index * step, 10) for index in range(count)])

        points = [point for point in product(*axes) if predicate is None or predicate(point)]

        return cls(kernel_fn, tuple(points), tuple(steps), box = (as_point(lows), as_point(highs)), **references)

    @property
    def default_radius(self) -> float:

        return 2 * max(self.steps)

    @property
    def array(self) -> np.ndarray:

        return self._array

    def contains(self, point) -> bool:

        return bool((np.abs(self._array - np.array(as_point(point))).max(axis = 1) <= 1e-9).any())

    def neighbors(self, points, eps : Optional[float] = None) -> List[Point]:

        """
            Grid points within Euclidean distance eps of any of the given
            points.
        """

        radius = self.default_radius if eps is None else eps

        targets = np.asarray(points, dtype = float).reshape(-1, self._array.shape[1])

        distances = cdist(self._array, targets)

        return [self.points[index] for index in np.flatnonzero(distances.min(axis = 1) <= radius + 1e-12)]

    def kernel_row(self, problem : DecisionProblem, point) -> Tuple[OutcomeDistribution, ...]:

        return tuple(self.kernel_fn(action, as_point(point)) for action in problem.actions)

    def model(self, model_id : str, problem : DecisionProblem, points : Sequence[Any]) -> SubjectiveModel:

        points = [as_point(point) for point in points]

        return SubjectiveModel(model_id, tuple(points),
            tuple(tuple(self.kernel_fn(action, point) for point in points) for action in problem.actions))
