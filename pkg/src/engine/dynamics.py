#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from logging import debug, info, warning
from collections import Counter
from math import floor, log, sqrt

from numpy.random import Generator
from scipy.special import logsumexp
import numpy as np

from .env import DecisionProblem, NoiseBlock, draw_batch, draw_noise, outcome_from_row
from .model import SubjectiveModel, Belief, check_prior
from .policy import Policy, PolicyMode, solve_policy
from .streams import PathStreams, stack_noise, wilson_interval
from .errors import ConfigError

"""
    Path simulation for dogmatic modelers and switchers.

    Each period t >= 1 starts with the switch rule: the Bayes factor of
    every switchable model against the current one is computed from the
    prior-weighted likelihoods, and the agent moves to the best model when
    its factor strictly exceeds alpha (ties between models go to the lowest
    index). The agent then acts with the current model's policy on that
    model's posterior, an outcome is drawn, and the likelihoods of every
    tracked model are updated. A last switch evaluation after period T - 1
    gives the model held at the horizon.

    Paths are simulated in chunks of CHUNK_SIZE, vectorized over the paths
    of a chunk. Chunks are spread over threads and reduced in path order.
"""

CHUNK_SIZE = 256

MODEL_TIE_TOLERANCE = 1e-12

"""
    Who is simulated: the initial model, its competitors (none for a
    dogmatic modeler), the full-support priors of every tracked model and
    the policies of the switchable ones.

    Observers have their likelihoods tracked but are never switched to.
    When a nature model is given, each path draws a parameter from that
    model's prior and outcomes are drawn from its kernel instead of the
    true process.
"""

@dataclass(eq = False)
class SwitcherConfig:

    problem : DecisionProblem
    initial_model : SubjectiveModel
    competing : Tuple[SubjectiveModel, ...] = ()
    priors : Dict[str, Belief] = field(default_factory = dict)
    policies : Dict[str, Policy] = field(default_factory = dict)
    alpha : float = 2.0
    observers : Tuple[SubjectiveModel, ...] = ()
    nature : Optional[SubjectiveModel] = None
    persist_window : float = 0.5

    def __post_init__(self):

        self.competing = tuple(self.competing)
        self.observers = tuple(self.observers)
        self.priors = dict(self.priors)
        self.policies = dict(self.policies)

        if not self.alpha > 1:
            raise ConfigError('The switching threshold must exceed 1, got %r' % self.alpha)

        if not 0 < self.persist_window <= 1:
            raise ConfigError('The persistence window must be a fraction in (0, 1], got %r' % self.persist_window)

        identifiers = [model.id for model in self.tracked]

        if len(set(identifiers)) != len(identifiers):
            raise ConfigError('Tracked models must have distinct identifiers: %s' % ', '.join(identifiers))

        for model in self.tracked + ((self.nature,) if self.nature else ()):

            model.check_against(self.problem)

            if model.id not in self.priors:
                raise ConfigError('No prior was given for model "%s"' % model.id)

            check_prior(model, self.priors[model.id])

        for model in self.switchable:
            if model.id not in self.policies:
                self.policies[model.id] = solve_policy(self.problem, model, PolicyMode())

    @property
    def switchable(self) -> Tuple[SubjectiveModel, ...]:

        return (self.initial_model,) + self.competing

    @property
    def tracked(self) -> Tuple[SubjectiveModel, ...]:

        return self.switchable + self.observers

    @property
    def dogmatic(self) -> bool:

        return not self.competing

    def index_of(self, model_id : str) -> int:

        for index, model in enumerate(self.tracked):
            if model.id == model_id:
                return index

        raise ConfigError('Model "%s" is not tracked by this configuration' % model_id)

"""
    Optional per-run measurements.
"""

@dataclass(frozen = True)
class AbsorptionWatch:

    # Whether every action stays in `actions` and the belief of `model_id`
    # keeps mass >= 1 - eps on `params`, at every period
    model_id : str
    actions : Tuple[int, ...]
    params : Tuple[int, ...]
    eps : float

@dataclass(frozen = True)
class BeliefMassWatch:

    # Median posterior mass of `model_id` on `params` at each checkpoint,
    # over the paths whose actions stayed in `actions` so far
    model_id : str
    actions : Tuple[int, ...]
    params : Tuple[int, ...]

@dataclass
class Diagnostics:

    checkpoints : Tuple[int, ...] = () # Numbers of observations
    ratio_pairs : Tuple[Tuple[str, str], ...] = () # (A, B): l^A / l^B at checkpoints
    supremum_stats : Tuple[Tuple[str, str, float], ...] = () # (A, B, eta): sup_t l^A / l^B > eta
    absorption : Optional[AbsorptionWatch] = None
    belief_mass : Optional[BeliefMassWatch] = None
    trajectory_every : int = 0 # Keep one period out of this many, 0 for none
    keep_records : bool = True

@dataclass
class SwitchEvent:

    t : int
    from_model : str
    to_model : str
    log_ratio : float
    tie : bool = False

@dataclass
class Trajectory:

    periods : np.ndarray
    models : List[str]
    actions : np.ndarray
    outcomes : np.ndarray # (kept periods, outcome dimension)
    utilities : np.ndarray
    log_likelihoods : np.ndarray # (kept periods, tracked models), after the period's observation

@dataclass
class PathRecord:

    path_id : int
    horizon : int
    switch_events : List[SwitchEvent]
    final_model : str
    final_beliefs : Dict[str, Tuple[float, ...]]
    action_frequencies : Tuple[float, ...]
    persist_proxy : bool
    absorbed_actions : Tuple[int, ...]
    cumulative_utility : float
    tie_breaks : int = 0
    first_action : int = 0
    trajectory : Optional[Trajectory] = None

    @property
    def switch_times(self) -> Tuple[int, ...]:

        return tuple(event.t for event in self.switch_events)

    @property
    def n_switches(self) -> int:

        return len(self.switch_events)

    def returned_to(self, model_id : str) -> bool:

        return any(event.to_model == model_id for event in self.switch_events)

"""
    The state of a batch of paths, one row per path.
"""

class PathBatch:

    def __init__(self, config : SwitcherConfig, count : int, nature_parameters : Optional[np.ndarray] = None):

        self.config = config
        self.problem = config.problem
        self.models = config.tracked
        self.switchable_count = len(config.switchable)
        self.policies = [config.policies[model.id] for model in config.switchable]
        self.log_alpha = log(config.alpha)

        self.count = count
        self.rows = np.arange(count)

        self.log_joint = [np.tile(np.log(config.priors[model.id].array), (count, 1)) for model in self.models]
        self.log_l = np.zeros((count, len(self.models)))

        self.current = np.zeros(count, dtype = np.int64)
        self.t = 0

        self.action_counts = np.zeros((count, self.problem.action_count), dtype = np.int64)
        self.utility = np.zeros(count)

        self.events : List[List[SwitchEvent]] = [[] for _ in range(count)]
        self.tie_breaks = np.zeros(count, dtype = np.int64)

        self.nature_parameters = nature_parameters

    def posterior(self, model_index : int, rows = slice(None)) -> np.ndarray:

        return np.exp(self.log_posterior(model_index, rows))

    def log_posterior(self, model_index : int, rows = slice(None)) -> np.ndarray:

        joint = self.log_joint[model_index][rows]

        return joint - logsumexp(joint, axis = 1, keepdims = True)

    def evaluate_switch(self):

        if self.t < 1 or self.switchable_count < 2:
            return

        log_ratios = self.log_l[:, :self.switchable_count] - self.log_l[self.rows, self.current][:, None]

        best = log_ratios.max(axis = 1)

        for row in np.flatnonzero(best > self.log_alpha):

            tied = np.flatnonzero(log_ratios[row] >= best[row] - MODEL_TIE_TOLERANCE)

            chosen = int(tied[0])

            if len(tied) > 1:
                self.tie_breaks[row] += 1

            self.events[row].append(SwitchEvent(self.t, self.models[self.current[row]].id, self.models[chosen].id,
                float(best[row]), len(tied) > 1))

            self.current[row] = chosen

    def act(self) -> np.ndarray:

        actions = np.zeros(self.count, dtype = np.int64)

        for model_index, policy in enumerate(self.policies):

            rows = np.flatnonzero(self.current == model_index)

            if rows.size:
                actions[rows] = policy.act_log_batch(self.log_posterior(model_index, rows))

        return actions

    def observe(self, actions : np.ndarray, noise : NoiseBlock) -> Tuple[np.ndarray, np.ndarray]:

        problem = self.problem

        outcomes = np.empty((self.count, problem.outcome_space.dimension))
        utilities = np.empty(self.count)

        played = np.unique(actions)

        if self.nature_parameters is None:

            for action_index in played:
                mask = actions == action_index
                outcomes[mask] = draw_batch(problem.true_dgp[action_index], noise.rows(mask))

        else:

            for action_index, omega_index in set(zip(actions.tolist(), self.nature_parameters.tolist())):
                mask = (actions == action_index) & (self.nature_parameters == omega_index)
                outcomes[mask] = draw_batch(self.config.nature.kernel[action_index][omega_index], noise.rows(mask))

        masks = [(action_index, actions == action_index) for action_index in played]

        for action_index, mask in masks:
            utilities[mask] = problem.utility.evaluate_batch(action_index, problem.actions[action_index], outcomes[mask])

        for model_index, model in enumerate(self.models):

            for action_index, mask in masks:
                self.log_joint[model_index][mask] += model.stacked(action_index).log_density_batch(outcomes[mask])

            self.log_l[:, model_index] = logsumexp(self.log_joint[model_index], axis = 1)

        self.action_counts[self.rows, actions] += 1
        self.utility += utilities
        self.t += 1

        return outcomes, utilities

    def advance(self, noise : NoiseBlock) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:

        self.evaluate_switch()

        actions = self.act()

        outcomes, utilities = self.observe(actions, noise)

        return actions, outcomes, utilities

    def state(self, row : int, last = None, switch_times : Tuple[int, ...] = ()) -> 'PathState':

        return PathState(
            t = self.t,
            current_model = self.models[self.current[row]].id,
            log_l = {model.id: float(self.log_l[row, index]) for index, model in enumerate(self.models)},
            beliefs = {model.id: Belief(model.id, tuple(self.posterior(index, [row])[0])) for index, model in enumerate(self.models)},
            action_counts = tuple(int(value) for value in self.action_counts[row]),
            last = last,
            cumulative_utility = float(self.utility[row]),
            switch_times = switch_times + tuple(event.t for event in self.events[row]),
            log_joint = {model.id: tuple(self.log_joint[index][row]) for index, model in enumerate(self.models)},
            nature_parameter = None if self.nature_parameters is None else int(self.nature_parameters[row])
        )

    @classmethod
    def from_state(cls, config : SwitcherConfig, state : 'PathState') -> 'PathBatch':

        batch = cls(config, 1, None if state.nature_parameter is None else np.array([state.nature_parameter]))

        for index, model in enumerate(batch.models):
            batch.log_joint[index][0] = state.log_joint[model.id]
            batch.log_l[0, index] = state.log_l[model.id]

        batch.current[0] = config.index_of(state.current_model)
        batch.t = state.t
        batch.action_counts[0] = state.action_counts
        batch.utility[0] = state.cumulative_utility

        return batch

def _nature_parameters(config : SwitcherConfig, streams : Sequence[PathStreams]) -> Optional[np.ndarray]:

    if config.nature is None:
        return None

    cumulative = np.cumsum(config.priors[config.nature.id].array)

    uniforms = np.array([path_streams.nature.random() for path_streams in streams])

    return np.minimum(np.searchsorted(cumulative, uniforms, side = 'right'), len(cumulative) - 1)

"""
    The outputs of one chunk: path records plus the per-path arrays the
    Monte Carlo summary reduces.
"""

@dataclass
class ChunkResult:

    records : List[PathRecord]
    ratios : np.ndarray # (paths, checkpoints, ratio pairs)
    suprema : np.ndarray # (paths, supremum statistics), log scale
    absorbed : np.ndarray # (paths,) bool
    belief_mass : np.ndarray # (paths, checkpoints), NaN where the paths left the action set
    log_likelihoods : np.ndarray # (paths, tracked models) at the horizon
    absorbed_half : np.ndarray # (paths,) bool, absorbed up to period horizon // 2

def run_batch(config : SwitcherConfig, streams : Sequence[PathStreams], horizon : int,
              diagnostics : Optional[Diagnostics] = None) -> ChunkResult:

    if horizon < 1:
        raise ConfigError('The horizon must be at least 1, got %r' % horizon)

    diagnostics = diagnostics or Diagnostics()

    problem = config.problem
    count = len(streams)

    selector, uniforms, normals = stack_noise([path_streams.noise(horizon, problem.outcome_space.dimension) for path_streams in streams])

    batch = PathBatch(config, count, _nature_parameters(config, streams))

    window_start = int(floor(horizon * (1 - config.persist_window)))

    played_in_window = np.zeros((count, problem.action_count), dtype = bool)
    first_actions = np.zeros(count, dtype = np.int64)

    checkpoints = {t: position for position, t in enumerate(diagnostics.checkpoints)}

    ratio_pairs = [(config.index_of(first), config.index_of(second)) for first, second in diagnostics.ratio_pairs]
    ratios = np.full((count, len(checkpoints), len(ratio_pairs)), np.nan)

    supremum_pairs = [(config.index_of(first), config.index_of(second)) for first, second, _ in diagnostics.supremum_stats]
    suprema = np.zeros((count, len(supremum_pairs)))

    absorption = diagnostics.absorption
    absorbed = np.ones(count, dtype = bool)
    absorbed_half = absorbed
    half = max(1, horizon // 2)

    if absorption:
        absorption_model = config.index_of(absorption.model_id)
        absorption_params = list(absorption.params)

    mass_watch = diagnostics.belief_mass
    belief_mass = np.full((count, len(checkpoints)), np.nan)
    stayed = np.ones(count, dtype = bool)

    if mass_watch:
        mass_model = config.index_of(mass_watch.model_id)
        mass_params = list(mass_watch.params)

    kept = []

    for t in range(horizon):

        if absorption:
            absorbed &= batch.posterior(absorption_model)[:, absorption_params].sum(axis = 1) >= 1 - absorption.eps - 1e-12

        batch.evaluate_switch()

        actions = batch.act()

        models_now = batch.current.copy()

        outcomes, utilities = batch.observe(actions, NoiseBlock(selector[:, t], uniforms[:, t], normals[:, t]))

        if t == 0:
            first_actions = actions

        if t >= window_start:
            played_in_window[batch.rows, actions] = True

        if absorption:
            absorbed &= np.isin(actions, absorption.actions)

        if t + 1 == half:
            absorbed_half = absorbed.copy()

        if mass_watch:
            stayed &= np.isin(actions, mass_watch.actions)

        for position, (first, second) in enumerate(supremum_pairs):
            suprema[:, position] = np.maximum(suprema[:, position], batch.log_l[:, first] - batch.log_l[:, second])

        if t + 1 in checkpoints:

            position = checkpoints[t + 1]

            for pair, (first, second) in enumerate(ratio_pairs):
                ratios[:, position, pair] = np.exp(batch.log_l[:, first] - batch.log_l[:, second])

            if mass_watch:
                belief_mass[stayed, position] = batch.posterior(mass_model, stayed)[:, mass_params].sum(axis = 1)

        if diagnostics.trajectory_every and t % diagnostics.trajectory_every == 0:
            kept.append((t, models_now, actions, outcomes, utilities, batch.log_l.copy()))

        if (t + 1) % 500 == 0:
            debug('Simulated %d of %d periods for %d paths' % (t + 1, horizon, count))

    batch.evaluate_switch()

    boundary = horizon * (1 - config.persist_window)

    records = []

    for row, path_streams in enumerate(streams):

        events = batch.events[row]

        trajectory = None

        if kept:
            trajectory = Trajectory(
                periods = np.array([entry[0] for entry in kept]),
                models = [config.tracked[entry[1][row]].id for entry in kept],
                actions = np.array([entry[2][row] for entry in kept]),
                outcomes = np.array([entry[3][row] for entry in kept]),
                utilities = np.array([entry[4][row] for entry in kept]),
                log_likelihoods = np.array([entry[5][row] for entry in kept])
            )

        records.append(PathRecord(
            path_id = path_streams.path_index,
            horizon = horizon,
            switch_events = events,
            final_model = config.tracked[batch.current[row]].id,
            final_beliefs = {model.id: tuple(batch.posterior(index, [row])[0]) for index, model in enumerate(batch.models)},
            action_frequencies = tuple(batch.action_counts[row] / horizon),
            persist_proxy = bool(batch.current[row] == 0 and not any(event.t > boundary for event in events)),
            absorbed_actions = tuple(int(action) for action in np.flatnonzero(played_in_window[row])),
            cumulative_utility = float(batch.utility[row]),
            tie_breaks = int(batch.tie_breaks[row]),
            first_action = int(first_actions[row]),
            trajectory = trajectory
        ))

    return ChunkResult(records, ratios, suprema, absorbed, belief_mass, batch.log_l.copy(), absorbed_half)

"""
    Single-path interface.
"""

@dataclass
class PathState:

    t : int
    current_model : str
    log_l : Dict[str, float]
    beliefs : Dict[str, Belief]
    action_counts : Tuple[int, ...]
    last : Optional[Tuple[int, Any]]
    cumulative_utility : float
    switch_times : Tuple[int, ...] = ()
    log_joint : Dict[str, Tuple[float, ...]] = field(default_factory = dict)
    nature_parameter : Optional[int] = None

def initial_state(config : SwitcherConfig, rng : Optional[Generator] = None) -> PathState:

    nature_parameters = None

    if config.nature is not None:
        nature_parameters = _nature_parameters(config, [PathStreams.from_generator(rng or np.random.default_rng(0))])

    return PathBatch(config, 1, nature_parameters).state(0)

def step(config : SwitcherConfig, state : PathState, rng : Generator) -> PathState:

    batch = PathBatch.from_state(config, state)

    actions, outcomes, _ = batch.advance(draw_noise(rng, 1, config.problem.outcome_space.dimension))

    return batch.state(0, (int(actions[0]), outcome_from_row(config.problem.outcome_space, outcomes[0])), state.switch_times)

def run_path(config : SwitcherConfig, horizon : int, rng : Union[Generator, PathStreams, None] = None,
             diagnostics : Optional[Diagnostics] = None) -> PathRecord:

    if isinstance(rng, PathStreams):
        streams = rng
    elif rng is None:
        streams = PathStreams(0, 0)
    else:
        streams = PathStreams.from_generator(rng)

    return run_batch(config, [streams], horizon, diagnostics or Diagnostics(trajectory_every = 1)).records[0]

"""
    The Monte Carlo harness and its summary.
"""

@dataclass
class MCSummary:

    paths : int
    horizon : int
    seed : int
    alpha : float
    persist_count : int
    persist_frequency : float
    persist_interval : Tuple[float, float]
    switch_histogram : Dict[int, int]
    ever_switched : float
    ever_switched_interval : Tuple[float, float]
    switched_at_first_period : float
    returned_to_initial : float
    absorption_frequencies : Dict[str, float]
    final_model_counts : Dict[str, int]
    ratio_checkpoints : List[Dict[str, Any]]
    supremum_exceedance : List[Dict[str, Any]]
    absorption_watch : Optional[Dict[str, Any]]
    belief_mass : List[Dict[str, Any]]
    log_likelihood_rates : Dict[str, float]
    mean_utility : float
    tie_breaks : int
    warnings : List[str]
    records : List[PathRecord] = field(default_factory = list, repr = False)

    def to_dict(self) -> Dict[str, Any]:

        return {key: value for key, value in self.__dict__.items() if key != 'records'}

def _action_set_name(problem : DecisionProblem, actions : Sequence[int]) -> str:

    return '{%s}' % ','.join(problem.action_names[action] for action in actions)

def _mean_and_error(values : np.ndarray) -> Tuple[float, float]:

    if values.size < 2:
        return float(values.mean()) if values.size else float('nan'), 0.0

    return float(values.mean()), float(values.std(ddof = 1) / sqrt(values.size))

def monte_carlo(config : SwitcherConfig, paths : int, horizon : int, seed : int = 0,
                diagnostics : Optional[Diagnostics] = None, threads : int = 1) -> MCSummary:

    if paths < 1:
        raise ConfigError('The number of paths must be at least 1, got %r' % paths)

    if horizon < 1:
        raise ConfigError('The horizon must be at least 1, got %r' % horizon)

    diagnostics = diagnostics or Diagnostics()

    problem = config.problem

    # Fill the lazily built kernel stacks before sharing the models between threads
    for model in config.tracked + ((config.nature,) if config.nature else ()):
        for action_index in range(problem.action_count):
            model.stacked(action_index)

    chunks = [range(start, min(start + CHUNK_SIZE, paths)) for start in range(0, paths, CHUNK_SIZE)]

    def run_chunk(path_ids : range) -> ChunkResult:

        return run_batch(config, [PathStreams(seed, path_id) for path_id in path_ids], horizon, diagnostics)

    with ThreadPoolExecutor(max_workers = max(1, threads)) as pool:
        results = list(pool.map(run_chunk, chunks))

    records = [record for result in results for record in result.records]
    ratios = np.concatenate([result.ratios for result in results])
    suprema = np.concatenate([result.suprema for result in results])
    absorbed = np.concatenate([result.absorbed for result in results])
    absorbed_half = np.concatenate([result.absorbed_half for result in results])
    belief_mass = np.concatenate([result.belief_mass for result in results])
    log_likelihoods = np.concatenate([result.log_likelihoods for result in results])

    initial_id = config.initial_model.id

    persist_count = sum(record.persist_proxy for record in records)
    ever_switched = sum(record.n_switches > 0 for record in records)

    ratio_checkpoints = []

    for pair, (first, second) in enumerate(diagnostics.ratio_pairs):
        for position, t in enumerate(diagnostics.checkpoints):
            mean, error = _mean_and_error(ratios[:, position, pair])
            ratio_checkpoints.append({'numerator': first, 'denominator': second, 't': t, 'mean': mean, 'se': error})

    supremum_exceedance = []

    for position, (first, second, eta) in enumerate(diagnostics.supremum_stats):
        frequency = float((suprema[:, position] > log(eta)).mean())
        supremum_exceedance.append({'numerator': first, 'denominator': second, 'eta': eta, 'frequency': frequency,
            'se': sqrt(frequency * (1 - frequency) / paths), 'bound': 1 / eta})

    absorption_watch = None

    if diagnostics.absorption:
        absorption_watch = {'frequency': float(absorbed.mean()), 'count': int(absorbed.sum()),
            'interval': wilson_interval(int(absorbed.sum()), paths), 'eps': diagnostics.absorption.eps,
            'half_horizon': max(1, horizon // 2), 'half_count': int(absorbed_half.sum()),
            'late_exits': int((absorbed_half & ~absorbed).sum())}

    belief_masses = []

    if diagnostics.belief_mass:
        for position, t in enumerate(diagnostics.checkpoints):
            column = belief_mass[:, position]
            column = column[~np.isnan(column)]
            belief_masses.append({'t': t, 'median': float(np.median(column)) if column.size else float('nan'), 'paths': int(column.size)})

    warnings = []

    competitors = len(config.competing)

    if competitors > 1 and config.alpha <= competitors:
        warnings.append('alpha = %g does not exceed the %d competing models, persistence is not guaranteed' % (config.alpha, competitors))

    for text in warnings:
        warning(text)

    summary = MCSummary(
        paths = paths,
        horizon = horizon,
        seed = seed,
        alpha = config.alpha,
        persist_count = persist_count,
        persist_frequency = persist_count / paths,
        persist_interval = wilson_interval(persist_count, paths),
        switch_histogram = dict(sorted(Counter(record.n_switches for record in records).items())),
        ever_switched = ever_switched / paths,
        ever_switched_interval = wilson_interval(ever_switched, paths),
        switched_at_first_period = sum(record.switch_times[:1] == (1,) for record in records) / paths,
        returned_to_initial = sum(record.returned_to(initial_id) for record in records) / paths,
        absorption_frequencies = {name: count / paths for name, count in sorted(Counter(
            _action_set_name(problem, record.absorbed_actions) for record in records).items())},
        final_model_counts = dict(sorted(Counter(record.final_model for record in records).items())),
        ratio_checkpoints = ratio_checkpoints,
        supremum_exceedance = supremum_exceedance,
        absorption_watch = absorption_watch,
        belief_mass = belief_masses,
        log_likelihood_rates = {model.id: float(log_likelihoods[:, index].mean() / horizon) for index, model in enumerate(config.tracked)},
        mean_utility = float(np.mean([record.cumulative_utility for record in records]) / horizon),
        tie_breaks = int(sum(record.tie_breaks for record in records)),
        warnings = warnings,
        records = records if diagnostics.keep_records else []
    )

    info('Simulated %d paths of %d periods: persistence proxy %.4f, at least one switch %.4f' %
        (paths, horizon, summary.persist_frequency, summary.ever_switched))

    return summary
