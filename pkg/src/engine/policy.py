#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
from dataclasses import dataclass
from logging import debug, info
from itertools import product
from enum import IntEnum

from scipy.special import logsumexp
from scipy.sparse import coo_matrix
import numpy as np

from .env import DecisionProblem, quadrature_nodes
from .model import SubjectiveModel, Belief
from .simplex import best_margin, MarginResult
from .errors import PolicyError

"""
    Subjective best responses. A policy maps a belief over a model's
    parameters to a single action index.

    Myopic policies maximize the current expected flow payoff. Discounted
    policies run value iteration on a regular grid over the belief simplex,
    interpolating continuation values over the Freudenthal triangulation of
    that grid.

    Ties are broken towards the lowest action index. A myopic comparison
    between two actions only treats per-parameter payoff gaps within
    TIE_TOLERANCE as ties; the belief-weighted sums of the remaining gaps
    are compared in log space, so that a preference carried by parameters
    of vanishing posterior mass keeps its sign.
"""

TIE_TOLERANCE = 1e-9

LOG_TIE_TOLERANCE = 1e-9 # Relative, between the positive and negative weighted gap sums

VALUE_ITERATION_TOLERANCE = 1e-8

MAX_SWEEPS = 100000

MAX_GRID_POINTS = 200000

QUADRATURE_NODES = 16

class PolicyKind(IntEnum):
    myopic = 0
    grid_dp = 1

@dataclass(frozen = True)
class PolicyMode:

    kind : PolicyKind = PolicyKind.myopic
    resolution : int = 0 # Grid points per simplex edge
    discount : Optional[float] = None # Defaults to the problem's discount factor

def payoff_table(problem : DecisionProblem, model : SubjectiveModel) -> np.ndarray:

    """
        Subjective expected flow payoffs R[w, a] of every action under
        every parameter of the model.
    """

    cached = model._payoff_tables.get(id(problem))

    if cached is None or cached[0] is not problem:

        model.check_against(problem)

        table = np.array([[problem.expected_utility(action_index, model.kernel[action_index][omega_index])
            for action_index in range(problem.action_count)]
            for omega_index in range(model.parameter_count)])

        table.setflags(write = False)

        model._payoff_tables[id(problem)] = cached = (problem, table)

    return cached[1]

def _belief_array(belief) -> np.ndarray:

    return np.asarray(getattr(belief, 'probs', belief), dtype = float)

def expected_payoffs(problem : DecisionProblem, model : SubjectiveModel, belief) -> np.ndarray:

    return _belief_array(belief) @ payoff_table(problem, model)

def _log_beliefs(beliefs) -> np.ndarray:

    with np.errstate(divide = 'ignore'):
        return np.log(np.atleast_2d(_belief_array(beliefs)))

def _masked_logsumexp(terms : np.ndarray, mask : np.ndarray) -> np.ndarray:

    masked = np.where(mask, terms, -np.inf)

    with np.errstate(divide = 'ignore', invalid = 'ignore'):
        return logsumexp(masked, axis = 1)

def preference_sign(log_beliefs : np.ndarray, gaps : np.ndarray, tolerance : float = TIE_TOLERANCE) -> np.ndarray:

    """
        Sign of sum_w p_w * gaps[w] for log beliefs of shape (n, P) and
        gaps of shape (P,) or (n, P): 1, -1 or 0 for a tie.
    """

    gaps = np.broadcast_to(gaps, log_beliefs.shape)

    live = np.abs(gaps) > tolerance

    with np.errstate(divide = 'ignore'):
        terms = log_beliefs + np.log(np.where(live, np.abs(gaps), 1.0))

    positive = _masked_logsumexp(terms, live & (gaps > 0))
    negative = _masked_logsumexp(terms, live & (gaps < 0))

    return np.where(positive > negative + LOG_TIE_TOLERANCE, 1, np.where(negative > positive + LOG_TIE_TOLERANCE, -1, 0))

def myopic_actions(payoffs : np.ndarray, log_beliefs : np.ndarray, tolerance : float = TIE_TOLERANCE) -> np.ndarray:

    """
        Myopic choice for every row of log_beliefs, given the payoff table
        R[w, a]: an action replaces the incumbent only when strictly
        preferred, so ties go to the lowest index.
    """

    chosen = np.zeros(log_beliefs.shape[0], dtype = np.int64)

    by_action = payoffs.T

    for candidate in range(1, payoffs.shape[1]):

        better = preference_sign(log_beliefs, by_action[candidate][None, :] - by_action[chosen], tolerance) > 0

        chosen[better] = candidate

    return chosen

def myopic_best_set(problem : DecisionProblem, model : SubjectiveModel, belief,
                    tolerance : float = TIE_TOLERANCE) -> Tuple[int, ...]:

    payoffs = payoff_table(problem, model)
    log_beliefs = _log_beliefs(belief)

    return tuple(action_index for action_index in range(problem.action_count)
        if not any(preference_sign(log_beliefs, payoffs[:, other] - payoffs[:, action_index], tolerance)[0] > 0
            for other in range(problem.action_count) if other != action_index))

def _lowest_best(values : np.ndarray) -> np.ndarray:

    # values has shape (beliefs, actions)
    return np.argmax(values >= values.max(axis = 1, keepdims = True) - TIE_TOLERANCE, axis = 1)

"""
    The regular simplex grid: every composition of N = resolution - 1 into
    as many parts as the model has parameters, divided by N.
"""

def compositions(total : int, parts : int) -> Iterator[Tuple[int, ...]]:

    if parts == 1:
        yield (total,)
        return

    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest

class SimplexGrid:

    def __init__(self, parts : int, resolution : int):

        if resolution < 2:
            raise PolicyError('A belief grid needs at least 2 points per simplex edge, got %d' % resolution)

        self.parts = parts
        self.divisions = resolution - 1

        if (self.divisions + 1) ** parts >= 2 ** 62:
            raise PolicyError('Belief grid with %d parameters and resolution %d is too large' % (parts, resolution))

        self.counts = np.array(list(compositions(self.divisions, parts)), dtype = np.int64)

        if self.counts.shape[0] > MAX_GRID_POINTS:
            raise PolicyError('Belief grid has %d points, more than %d' % (self.counts.shape[0], MAX_GRID_POINTS))

        self.beliefs = self.counts / self.divisions

        self.radix = (self.divisions + 1) ** np.arange(parts, dtype = np.int64)

        keys = self.counts @ self.radix

        self.order = np.argsort(keys)
        self.sorted_keys = keys[self.order]

    def __len__(self):

        return self.counts.shape[0]

    def index(self, counts : np.ndarray) -> np.ndarray:

        return self.order[np.searchsorted(self.sorted_keys, counts @ self.radix)]

    def interpolation(self, beliefs : np.ndarray) -> Tuple[np.ndarray, np.ndarray]:

        """
            Vertices (grid indices) and barycentric weights of the
            Freudenthal simplex containing each belief, both of shape
            (beliefs, parts).
        """

        count, parts, divisions = beliefs.shape[0], self.parts, self.divisions

        if parts == 1:
            return np.zeros((count, 1), dtype = np.int64), np.ones((count, 1))

        # Cumulative coordinates from the last parameter: y_0 = N >= y_1 >= ... >= 0
        scaled = np.clip(np.cumsum((divisions * beliefs)[:, ::-1], axis = 1)[:, ::-1], 0, divisions)
        scaled[:, 0] = divisions

        base = np.clip(np.floor(scaled), 0, divisions)
        fraction = np.clip(scaled - base, 0, 1)
        fraction[:, 0] = 0

        order = np.argsort(-fraction[:, 1:], axis = 1, kind = 'stable') + 1
        ordered = np.take_along_axis(fraction, order, axis = 1)

        weights = np.empty((count, parts))
        weights[:, 0] = 1 - ordered[:, 0]
        weights[:, 1:-1] = ordered[:, :-1] - ordered[:, 1:]
        weights[:, -1] = ordered[:, -1]

        vertices = np.empty((count, parts, parts))
        vertices[:, 0] = base

        rows = np.arange(count)

        for step in range(1, parts):
            vertices[:, step] = vertices[:, step - 1]
            vertices[rows, step, order[:, step - 1]] += 1

        counts = (vertices - np.concatenate([vertices[:, :, 1:], np.zeros((count, parts, 1))], axis = 2)).astype(np.int64)

        return self.index(counts.reshape(-1, parts)).reshape(count, parts), weights

    def interpolate(self, values : np.ndarray, beliefs : np.ndarray) -> np.ndarray:

        vertices, weights = self.interpolation(beliefs)

        return (values[vertices] * weights).sum(axis = 1)

"""
    Per-action quadrature of the predictive distribution: outcome nodes,
    the parameter each node was generated from, its weight under that
    parameter's kernel, and the log-density of the node under every
    parameter.
"""

@dataclass
class PredictiveNodes:

    origins : np.ndarray
    weights : np.ndarray
    log_densities : np.ndarray # (nodes, parameters)

    def posteriors(self, beliefs : np.ndarray) -> Tuple[np.ndarray, np.ndarray]:

        """
            For beliefs of shape (n, P), the probability of each node
            (n, K) and the posterior after observing it (n, K, P).
        """

        with np.errstate(divide = 'ignore'):
            log_beliefs = np.log(beliefs)

        joint = log_beliefs[:, None, :] + self.log_densities[None, :, :]

        posterior = np.exp(joint - logsumexp(joint, axis = 2, keepdims = True))

        return beliefs[:, self.origins] * self.weights[None, :], posterior

def predictive_nodes(model : SubjectiveModel, action_index : int, count : int = QUADRATURE_NODES) -> PredictiveNodes:

    points, origins, weights = [], [], []

    for omega_index, dist in enumerate(model.kernel[action_index]):

        nodes, node_weights = quadrature_nodes(dist, count)

        points.append(nodes)
        origins.append(np.full(len(node_weights), omega_index))
        weights.append(node_weights)

    points = np.concatenate(points)

    return PredictiveNodes(np.concatenate(origins), np.concatenate(weights), model.stacked(action_index).log_density_batch(points))

"""
    A solved pure policy for one model.
"""

class Policy:

    def __init__(self, problem : DecisionProblem, model : SubjectiveModel, mode : PolicyMode):

        self.problem, self.model, self.mode = problem, model, mode

        self.model_id = model.id

        self.payoffs = payoff_table(problem, model)

        self.discount = 0.0

        self.grid : Optional[SimplexGrid] = None
        self.values : Optional[np.ndarray] = None
        self.grid_actions : Optional[np.ndarray] = None
        self.nodes : List[PredictiveNodes] = []

        self.residual = 0.0
        self.sweeps = 0
        self.grid_error = 0.0

    def act(self, belief) -> int:

        return int(self.act_batch(_belief_array(belief)[None, :])[0])

    def action_values(self, beliefs : np.ndarray) -> np.ndarray:

        """
            Flow payoff plus discounted interpolated continuation value,
            per belief (rows) and action (columns).
        """

        flow = beliefs @ self.payoffs

        if self.grid is None or self.discount == 0:
            return flow

        continuation = np.empty_like(flow)

        for action_index, nodes in enumerate(self.nodes):

            probabilities, posteriors = nodes.posteriors(beliefs)

            interpolated = self.grid.interpolate(self.values, posteriors.reshape(-1, self.model.parameter_count))

            continuation[:, action_index] = (probabilities * interpolated.reshape(probabilities.shape)).sum(axis = 1)

        return flow + self.discount * continuation

    @property
    def myopic(self) -> bool:

        return self.grid is None or self.discount == 0

    def act_batch(self, beliefs : np.ndarray) -> np.ndarray:

        if self.myopic:
            return myopic_actions(self.payoffs, _log_beliefs(beliefs))

        return _lowest_best(self.action_values(beliefs))

    def act_log_batch(self, log_beliefs : np.ndarray) -> np.ndarray:

        """
            act_batch for normalized log beliefs, exact for the myopic
            choice even where probabilities underflow.
        """

        if self.myopic:
            return myopic_actions(self.payoffs, log_beliefs)

        return _lowest_best(self.action_values(np.exp(log_beliefs)))

    def value(self, belief) -> float:

        return float(self.action_values(_belief_array(belief)[None, :]).max())

def _transition_matrices(grid : SimplexGrid, nodes : List[PredictiveNodes]) -> list:

    matrices = []

    for action_nodes in nodes:

        probabilities, posteriors = action_nodes.posteriors(grid.beliefs)

        vertices, weights = grid.interpolation(posteriors.reshape(-1, grid.parts))

        rows = np.repeat(np.arange(len(grid)), probabilities.shape[1] * grid.parts)

        entries = (probabilities.reshape(-1)[:, None] * weights).reshape(-1)

        matrices.append(coo_matrix((entries, (rows, vertices.reshape(-1))), shape = (len(grid), len(grid))).tocsr())

    return matrices

def _grid_error(policy : Policy) -> float:

    """
        Largest gap between the one-step lookahead value and the
        interpolated value, at midpoints between neighbouring grid points.
    """

    grid = policy.grid

    if grid.parts == 1 or grid.divisions < 2:
        return 0.0

    step = np.zeros(grid.parts)
    step[0], step[1] = -0.5, 0.5

    samples = grid.beliefs[grid.counts[:, 0] > 0][:200] + step / grid.divisions

    lookahead = policy.action_values(samples).max(axis = 1)

    return float(np.abs(lookahead - grid.interpolate(policy.values, samples)).max())

def solve_policy(problem : DecisionProblem, model : SubjectiveModel, mode : PolicyMode = PolicyMode()) -> Policy:

    policy = Policy(problem, model, mode)

    if mode.kind == PolicyKind.myopic:
        return policy

    discount = problem.discount if mode.discount is None else mode.discount

    if not 0 <= discount < 1:
        raise PolicyError('Discount factor must lie in [0, 1), got %r' % discount)

    grid = SimplexGrid(model.parameter_count, mode.resolution)

    nodes = [predictive_nodes(model, action_index) for action_index in range(problem.action_count)]

    flow = grid.beliefs @ policy.payoffs

    values = flow.max(axis = 1)
    residual = 0.0
    sweeps = 1

    if discount > 0:

        transitions = _transition_matrices(grid, nodes)

        for sweeps in range(1, MAX_SWEEPS + 1):

            updated = np.column_stack([flow[:, action_index] + discount * (transitions[action_index] @ values)
                for action_index in range(problem.action_count)]).max(axis = 1)

            residual = float(np.abs(updated - values).max())
            values = updated

            if sweeps % 50 == 0:
                debug('Value iteration for "%s": sweep %d, residual %.3g' % (model.id, sweeps, residual))

            if residual < VALUE_ITERATION_TOLERANCE:
                break

    policy.discount, policy.grid, policy.values, policy.nodes = discount, grid, values, nodes
    policy.residual, policy.sweeps = residual, sweeps

    policy.grid_actions = policy.act_batch(grid.beliefs)
    policy.grid_error = _grid_error(policy) if discount > 0 else 0.0

    info('Solved a %d-point belief grid for "%s" in %d sweeps (residual %.3g, grid error %.3g)' %
        (len(grid), model.id, sweeps, residual, policy.grid_error))

    return policy

"""
    Certificates over faces of the belief simplex. Expected utility is
    linear in the belief, so optimality at every belief of a face reduces
    to the vertices, and optimality somewhere on a face to a small linear
    program.
"""

def action_optimal_on_face(problem : DecisionProblem, model : SubjectiveModel, action_index : int,
                           param_subset : Sequence[int]) -> bool:

    payoffs = payoff_table(problem, model)[list(param_subset)]

    return bool((payoffs[:, [action_index]] - payoffs >= -TIE_TOLERANCE).all())

def best_response_margin(problem : DecisionProblem, model : SubjectiveModel, action_index : int,
                         param_subset : Sequence[int], required : Sequence[int] = ()) -> MarginResult:

    """
        The largest worst-case utility gap of an action over the other
        actions, over beliefs supported on param_subset. Actions listed in
        required must be exactly indifferent with it. The belief returned
        is expanded to all the model's parameters.
    """

    subset = list(param_subset)

    payoffs = payoff_table(problem, model)[subset]

    others = [other for other in range(problem.action_count) if other != action_index and other not in required]

    rows = np.array([payoffs[:, action_index] - payoffs[:, other] for other in others]).reshape(-1, len(subset))
    equalities = np.array([payoffs[:, action_index] - payoffs[:, other] for other in required if other != action_index])

    result = best_margin(rows, equalities.reshape(-1, len(subset)))

    if not result.feasible:
        return result

    belief = np.zeros(model.parameter_count)
    belief[subset] = result.belief

    return MarginResult(True, float('inf') if not others else result.margin, belief)

def action_somewhere_optimal(problem : DecisionProblem, model : SubjectiveModel, action_index : int,
                             param_subset : Sequence[int]) -> bool:

    return best_response_margin(problem, model, action_index, param_subset).margin >= -TIE_TOLERANCE

def somewhere_optimal_on_grid(problem : DecisionProblem, model : SubjectiveModel, action_index : int,
                              param_subset : Sequence[int], resolution : int = 200) -> bool:

    """
        Dense-grid counterpart of action_somewhere_optimal, for faces of at
        most three parameters.
    """

    subset = list(param_subset)

    if len(subset) > 3:
        raise PolicyError('Dense grid search is limited to faces of 3 parameters')

    beliefs = np.array(list(compositions(resolution, len(subset)))) / resolution

    payoffs = beliefs @ payoff_table(problem, model)[subset]

    gaps = payoffs[:, [action_index]] - np.delete(payoffs, action_index, axis = 1)

    return bool(gaps.size == 0 or (gaps.min(axis = 1) >= -TIE_TOLERANCE).any())
