#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, List, Optional, Sequence, Tuple
from dataclasses import dataclass, field, replace
from logging import debug, info, warning
from collections import deque

import numpy as np

from .env import DecisionProblem
from .model import SubjectiveModel, Belief, QFamily, Point, kl_divergence, kl_minimizers, weighted_kl, \
    same_distribution, dominance_moment, SCE_KL_TOLERANCE
from .policy import PolicyKind, PolicyMode, solve_policy, best_response_margin, action_optimal_on_face, \
    action_somewhere_optimal, compositions, TIE_TOLERANCE
from .dynamics import SwitcherConfig, Diagnostics, AbsorptionWatch, monte_carlo
from .errors import ConfigError

"""
    Berk-Nash equilibria of a subjective model: strategies that are
    myopically optimal against some belief supported on the parameters
    minimizing the strategy-weighted divergence from the truth.

    Pure equilibria are found exactly with one linear program per action.
    Mixed equilibria are searched on a grid over the action simplex and
    grouped into connected components.
"""

SUPPORT_TOLERANCE = 1e-9

STRICT_MARGIN = 1e-9

KNIFE_EDGE_MARGIN = 1e-8

DOMINANCE_TOLERANCE = 1e-9

KL_IMPROVEMENT_TOLERANCE = 1e-9

REFINEMENT_WIDTH = 1e-10

DEFAULT_D_CANDIDATES = (1.0, 0.5, 2.0)

# Largest share of the paths absorbed at half the horizon that may leave before the horizon
LATE_EXIT_LIMIT = 0.05

@dataclass(frozen = True)
class Strategy:

    probs : Tuple[float, ...]

    def __post_init__(self):

        probs = np.asarray(self.probs, dtype = float)

        if probs.ndim != 1 or probs.size == 0 or probs.min() < -SUPPORT_TOLERANCE or abs(probs.sum() - 1) > 1e-9:
            raise ConfigError('Not a mixed strategy: %r' % (self.probs,))

        probs = np.clip(probs, 0, None)

        object.__setattr__(self, 'probs', tuple(float(value) for value in probs / probs.sum()))

    @classmethod
    def pure(cls, action_count : int, action_index : int) -> 'Strategy':

        return cls(tuple(float(index == action_index) for index in range(action_count)))

    @property
    def support(self) -> Tuple[int, ...]:

        return tuple(index for index, value in enumerate(self.probs) if value > SUPPORT_TOLERANCE)

    @property
    def is_pure(self) -> bool:

        return len(self.support) == 1

    @property
    def array(self) -> np.ndarray:

        return np.array(self.probs)

@dataclass
class PAbsorption:

    certified : bool = False
    route : str = ''
    estimate : Optional[float] = None
    interval : Optional[Tuple[float, float]] = None
    eps : Optional[float] = None
    paths : int = 0
    horizon : int = 0
    prior_mass : Optional[float] = None # Initial prior mass on the minimizers
    half_count : int = 0 # Paths absorbed up to half the horizon
    late_exits : int = 0 # Of those, paths leaving before the horizon

    @property
    def decaying(self) -> bool:

        return self.late_exits > LATE_EXIT_LIMIT * self.half_count

    @property
    def is_p_absorbing(self) -> bool:

        # Monte Carlo evidence is one-sided: it needs a positive lower bound and
        # an absorbed share that holds over the second half of the horizon
        return self.certified or (self.interval is not None and self.interval[0] > 0 and not self.decaying)

@dataclass
class FamilyChecks:

    eps : float
    locally_dominant : Optional[bool] = None
    dominance_order : Optional[float] = None # First d passing the moment test
    dominance_failure : Optional[Dict[str, Any]] = None
    footnote_condition : Optional[bool] = None # Mixed strategies: same minimizers at the pure strategies of the support
    locally_kl_minimizing : Optional[bool] = None
    kl_witnesses : List[Dict[str, Any]] = field(default_factory = list)

@dataclass
class Component:

    members : List[Tuple[float, ...]]
    lows : Tuple[float, ...]
    highs : Tuple[float, ...]
    interval : Optional[Tuple[float, float]] = None # Refined range of the first action's weight, two actions only

@dataclass
class EquilibriumRecord:

    strategy : Strategy
    minimizers : Tuple[int, ...]
    supporting_beliefs : List[Belief]
    margin : float = 0.0
    bne : bool = True
    quasi_strict : bool = False
    uniformly_quasi_strict : bool = False
    sce : bool = False
    knife_edge : bool = False
    classified : bool = False
    p_absorbing : Optional[PAbsorption] = None
    family_checks : Optional[FamilyChecks] = None
    component : Optional[Component] = None

    @property
    def uniformly_quasi_strict_sce(self) -> bool:

        return self.uniformly_quasi_strict and self.sce

    @property
    def support(self) -> Tuple[int, ...]:

        return self.strategy.support

    def describe(self, problem : DecisionProblem) -> str:

        if self.strategy.is_pure:
            text = 'pure %s' % problem.action_names[self.support[0]]
        else:
            text = 'mixed (%s)' % ', '.join('%s: %.4g' % (problem.action_names[index], self.strategy.probs[index]) for index in self.support)

        flags = [name for name in ('quasi_strict', 'uniformly_quasi_strict', 'sce', 'knife_edge') if getattr(self, name)]

        return '%s [%s]' % (text, ', '.join(flags) or 'bne')

"""
    Enumeration.
"""

def _feasible_at(problem : DecisionProblem, model : SubjectiveModel, sigma : np.ndarray):

    """
        Whether sigma is a Berk-Nash equilibrium: some belief on its KL
        minimizers makes every action of its support optimal. Returns the
        minimizers and the margin result.
    """

    support = [index for index, value in enumerate(sigma) if value > SUPPORT_TOLERANCE]

    minimizers = kl_minimizers(problem, model, sigma)

    result = best_response_margin(problem, model, support[0], minimizers, support[1:])

    return result.feasible and result.margin >= -TIE_TOLERANCE, minimizers, result

def enumerate_pure_bne(problem : DecisionProblem, model : SubjectiveModel) -> List[EquilibriumRecord]:

    records = []

    for action_index in range(problem.action_count):

        strategy = Strategy.pure(problem.action_count, action_index)

        minimizers = kl_minimizers(problem, model, strategy.array)

        result = best_response_margin(problem, model, action_index, minimizers)

        debug('Pure action %s: minimizers %r, margin %.6g' % (problem.action_names[action_index], minimizers, result.margin))

        if result.feasible and result.margin >= -TIE_TOLERANCE:
            records.append(EquilibriumRecord(strategy, minimizers, [Belief(model.id, tuple(result.belief))], result.margin))

    return records

def _refine_end(feasible, inside : float, outside : float) -> float:

    while abs(inside - outside) > REFINEMENT_WIDTH:

        middle = (inside + outside) / 2

        if feasible(middle):
            inside = middle
        else:
            outside = middle

    return inside

def enumerate_mixed_bne(problem : DecisionProblem, model : SubjectiveModel, grid_resolution : int = 20) -> List[EquilibriumRecord]:

    """
        Connected components of the Berk-Nash strategies found on the grid
        of strategies with weights in multiples of 1 / grid_resolution.
        Components made of a single pure strategy are left to the pure
        enumeration.
    """

    if grid_resolution < 10:
        raise ConfigError('The mixed strategy grid needs a resolution of at least 10, got %d' % grid_resolution)

    actions = problem.action_count

    if actions == 1:
        return []

    points = {}

    for counts in compositions(grid_resolution, actions):

        sigma = np.array(counts) / grid_resolution

        feasible, minimizers, result = _feasible_at(problem, model, sigma)

        if feasible:
            points[counts] = (minimizers, result)

    debug('%d of the mixed strategy grid points are Berk-Nash equilibria' % len(points))

    seen, records = set(), []

    for start in sorted(points, reverse = True):

        if start in seen:
            continue

        members, queue = [], deque([start])
        seen.add(start)

        while queue:

            counts = queue.popleft()
            members.append(counts)

            for giver in range(actions):
                for taker in range(actions):

                    if giver == taker or counts[giver] == 0:
                        continue

                    neighbor = list(counts)
                    neighbor[giver] -= 1
                    neighbor[taker] += 1
                    neighbor = tuple(neighbor)

                    if neighbor in points and neighbor not in seen:
                        seen.add(neighbor)
                        queue.append(neighbor)

        if len(members) == 1 and max(members[0]) == grid_resolution:
            continue

        strategies = np.array(members) / grid_resolution

        centroid = strategies.mean(axis = 0)
        representative = members[int(np.argmin(((strategies - centroid) ** 2).sum(axis = 1)))]

        minimizers, result = points[representative]

        interval = None

        if actions == 2:

            def feasible(weight):
                return _feasible_at(problem, model, np.array([weight, 1 - weight]))[0]

            weights = sorted(strategies[:, 0])
            low, high = weights[0], weights[-1]

            if low > 0:
                low = _refine_end(feasible, low, low - 1 / grid_resolution)
            if high < 1:
                high = _refine_end(feasible, high, high + 1 / grid_resolution)

            interval = (float(low), float(high))

        component = Component([tuple(row) for row in strategies.tolist()], tuple(strategies.min(axis = 0)), tuple(strategies.max(axis = 0)), interval)

        records.append(EquilibriumRecord(Strategy(tuple(np.array(representative) / grid_resolution)), minimizers,
            [Belief(model.id, tuple(result.belief))], result.margin, component = component))

    return records

def enumerate_bne(problem : DecisionProblem, model : SubjectiveModel, grid_resolution : int = 20) -> List[EquilibriumRecord]:

    records = enumerate_pure_bne(problem, model) + enumerate_mixed_bne(problem, model, grid_resolution)

    info('Model "%s" has %d Berk-Nash equilibrium records' % (model.id, len(records)))

    return records

"""
    Classification.
"""

def classify(problem : DecisionProblem, model : SubjectiveModel, record : EquilibriumRecord,
             numerical_error : float = 0.0) -> EquilibriumRecord:

    support = record.support
    minimizers = record.minimizers
    outside = [index for index in range(problem.action_count) if index not in support]

    strict = best_response_margin(problem, model, support[0], minimizers, support[1:])

    quasi_strict = strict.feasible and strict.margin > STRICT_MARGIN

    uniformly_quasi_strict = all(action_optimal_on_face(problem, model, action_index, minimizers) for action_index in support) and \
        not any(action_somewhere_optimal(problem, model, action_index, minimizers) for action_index in outside)

    values = weighted_kl(problem, model, record.strategy.array)

    sce = bool(values[list(minimizers)].min() < SCE_KL_TOLERANCE) and all(
        same_distribution(problem.true_dgp[action_index], model.kernel[action_index][omega_index])
        for omega_index in minimizers for action_index in support)

    knife_edge = bool(outside) and strict.feasible and abs(strict.margin) < max(KNIFE_EDGE_MARGIN, 10 * numerical_error)

    if knife_edge:
        warning('Knife-edge classification for %s: best-response margin %.3g' % (record.describe(problem), strict.margin))

    supporting_beliefs = record.supporting_beliefs

    if strict.feasible and quasi_strict:
        supporting_beliefs = [Belief(model.id, tuple(strict.belief))] + supporting_beliefs[1:]

    return replace(record,
        supporting_beliefs = supporting_beliefs,
        quasi_strict = quasi_strict or uniformly_quasi_strict,
        uniformly_quasi_strict = uniformly_quasi_strict,
        sce = sce,
        knife_edge = knife_edge,
        margin = strict.margin if strict.feasible else record.margin,
        classified = True)

def find_equilibria(problem : DecisionProblem, model : SubjectiveModel, grid_resolution : int = 20,
                    numerical_error : float = 0.0) -> List[EquilibriumRecord]:

    return [classify(problem, model, record, numerical_error) for record in enumerate_bne(problem, model, grid_resolution)]

"""
    p-absorption. Uniformly quasi-strict equilibria are certified. Others
    get a one-sided Monte Carlo estimate: a dogmatic modeler starts from a
    prior with mass 1 - eps / 2 on the equilibrium's minimizers, and a path
    counts when it only plays the support and the belief keeps mass
    1 - eps on the minimizers up to the horizon. The prior mass actually
    used is reported with the estimate.

    The estimate only counts as evidence when the paths absorbed at half
    the horizon mostly stay absorbed: an equilibrium left again and again,
    at a rate decaying with time, keeps a share of the paths absorbed for
    any finite horizon.
"""

def absorption_prior(model : SubjectiveModel, record : EquilibriumRecord, eps : float) -> Belief:

    inside = list(record.minimizers)
    outside = [index for index in range(model.parameter_count) if index not in inside]

    witness = record.supporting_beliefs[0].array[inside]
    witness = witness / witness.sum() if witness.sum() > 0 else np.full(len(inside), 1 / len(inside))

    # Keep full support on the face
    face = 0.999 * witness + 0.001 / len(inside)

    probs = np.zeros(model.parameter_count)

    if outside:
        probs[inside] = (1 - eps / 2) * face
        probs[outside] = eps / 2 / len(outside)
    else:
        probs[inside] = face

    return Belief.from_weights(model.id, probs)

def estimate_p_absorbing(problem : DecisionProblem, model : SubjectiveModel, record : EquilibriumRecord,
                         eps : float = 0.05, paths : int = 1000, horizon : int = 1000, seed : int = 0,
                         threads : int = 1, policy_mode : PolicyMode = PolicyMode()) -> EquilibriumRecord:

    if not record.classified:
        record = classify(problem, model, record)

    if record.uniformly_quasi_strict:
        return replace(record, p_absorbing = PAbsorption(certified = True, route = 'uniformly-quasi-strict'))

    policies = {}

    if policy_mode.kind != PolicyKind.myopic:
        policies[model.id] = solve_policy(problem, model, policy_mode)

    prior = absorption_prior(model, record, eps)

    config = SwitcherConfig(problem, model, priors = {model.id: prior}, policies = policies)

    summary = monte_carlo(config, paths, horizon, seed, Diagnostics(
        absorption = AbsorptionWatch(model.id, record.support, record.minimizers, eps), keep_records = False), threads)

    watch = summary.absorption_watch

    info('Absorption estimate for %s: %.4f in [%.4f, %.4f] over %d paths of %d periods' %
        (record.describe(problem), watch['frequency'], watch['interval'][0], watch['interval'][1], paths, horizon))

    if watch['late_exits']:
        info('%d of the %d paths absorbed at period %d left before the horizon' % (watch['late_exits'], watch['half_count'], watch['half_horizon']))

    return replace(record, p_absorbing = PAbsorption(False, 'monte-carlo', watch['frequency'], watch['interval'], eps, paths, horizon,
        float(prior.array[list(record.minimizers)].sum()), watch['half_count'], watch['late_exits']))

"""
    Checks against a q-family around the equilibrium's minimizers.
"""

def _family_warnings(family : QFamily, model : SubjectiveModel):

    for point in model.parameters:
        if not family.contains(point):
            warning('Parameter %r of model "%s" is not a point of the family grid' % (point, model.id))

def check_local_dominance(problem : DecisionProblem, family : QFamily, model : SubjectiveModel, record : EquilibriumRecord,
                          eps : Optional[float] = None, d_candidates : Sequence[float] = DEFAULT_D_CANDIDATES) -> EquilibriumRecord:

    eps = family.default_radius if eps is None else eps

    _family_warnings(family, model)

    centers = [model.parameters[index] for index in record.minimizers]
    neighbors = family.neighbors(centers, eps)

    footnote = None

    if not record.strategy.is_pure:
        footnote = all(kl_minimizers(problem, model, Strategy.pure(problem.action_count, action_index).array) == record.minimizers
            for action_index in record.support)

    passing, failure = None, None

    for d in d_candidates:

        failed = None

        for action_index in record.support:
            for center in centers:
                for neighbor in neighbors:

                    moment = dominance_moment(problem, family.kernel_fn, action_index, neighbor, center, d)

                    if not moment <= 1 + DOMINANCE_TOLERANCE:
                        failed = {'d': d, 'action': problem.action_names[action_index], 'center': center, 'neighbor': neighbor, 'moment': moment}
                        break

                if failed:
                    break
            if failed:
                break

        if failed is None:
            passing = d
            break

        failure = failure or failed

    dominant = passing is not None and footnote is not False

    debug('Local dominance for %s over %d neighbours: %s' % (record.describe(problem), len(neighbors), 'd = %g' % passing if passing else failure))

    checks = replace(record.family_checks) if record.family_checks else FamilyChecks(eps)
    checks.eps, checks.locally_dominant, checks.dominance_order, checks.dominance_failure, checks.footnote_condition = \
        eps, dominant, passing, None if passing is not None else failure, footnote

    return replace(record, family_checks = checks)

def check_locally_kl_minimizing(problem : DecisionProblem, family : QFamily, model : SubjectiveModel, record : EquilibriumRecord,
                                eps : Optional[float] = None) -> EquilibriumRecord:

    """
        Whether no grid point of the family near the minimizers reaches a
        strictly lower strategy-weighted divergence. Every strategy of a
        mixed component is tried; the record passes when one of them does,
        and the violating grid points of the others are kept as witnesses.
    """

    eps = family.default_radius if eps is None else eps

    _family_warnings(family, model)

    divergences : Dict[Tuple[int, Point], float] = {}

    def divergence(action_index : int, point : Point) -> float:

        key = (action_index, point)

        if key not in divergences:
            divergences[key] = kl_divergence(problem.true_dgp[action_index], family.kernel_fn(problem.actions[action_index], point))

        return divergences[key]

    strategies = [record.strategy.array] if record.component is None else [np.array(member) for member in record.component.members]

    passes, witnesses = False, {}

    for sigma in strategies:

        support = [index for index, value in enumerate(sigma) if value > SUPPORT_TOLERANCE]

        minimizers = kl_minimizers(problem, model, sigma)
        centers = [model.parameters[index] for index in minimizers]

        def value(point : Point) -> float:
            return sum(sigma[action_index] * divergence(action_index, point) for action_index in support)

        worst = max(value(center) for center in centers)

        violations = [(neighbor, worst - value(neighbor)) for neighbor in family.neighbors(centers, eps)
            if value(neighbor) < worst - KL_IMPROVEMENT_TOLERANCE]

        if not violations:
            passes = True
            continue

        for neighbor, improvement in violations:
            if neighbor not in witnesses or witnesses[neighbor]['improvement'] < improvement:
                witnesses[neighbor] = {'point': neighbor, 'improvement': improvement, 'strategy': tuple(float(value) for value in sigma)}

    ordered = sorted(witnesses.values(), key = lambda witness: -witness['improvement'])

    debug('Local KL minimization for %s: %s, %d violating neighbours' % (record.describe(problem), passes, len(ordered)))

    checks = replace(record.family_checks) if record.family_checks else FamilyChecks(eps)
    checks.eps, checks.locally_kl_minimizing, checks.kl_witnesses = eps, passes, ordered

    return replace(record, family_checks = checks)
