#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, List, Optional, Sequence, Tuple
from dataclasses import dataclass, field, replace
from logging import debug, info, warning
from enum import IntEnum

import numpy as np

from .env import DecisionProblem
from .model import SubjectiveModel, Belief, QFamily, same_distribution, convex_mix_model, augment_model, \
    restrict_model, as_point
from .policy import PolicyKind, PolicyMode, solve_policy
from .dynamics import SwitcherConfig, Diagnostics, monte_carlo
from .equilibrium import EquilibriumRecord, find_equilibria, estimate_p_absorbing, check_local_dominance, \
    check_locally_kl_minimizing, DEFAULT_D_CANDIDATES
from .streams import wilson_interval
from .errors import ConfigError

"""
    The verdict engine: composes equilibrium classifications into global
    and local robustness conclusions, and builds the competing models used
    to falsify them by simulation.

    Every verdict names the rules it rests on:

    * correct-specification: a parameter reproduces the truth at every
      action, so no competing model can overturn it.
    * sce-necessity: without a self-confirming equilibrium, some competing
      model eventually wins against any prior.
    * uniformly-quasi-strict-sce: such an equilibrium is p-absorbing, which
      suffices for global robustness.
    * empirical-p-absorption: Monte Carlo evidence of p-absorption.
    * local-dominance: a p-absorbing pure equilibrium at which the model
      dominates its family neighbours in the density-ratio moment sense.
    * local-kl-minimization-failure: under convergent action frequencies,
      an equilibrium beaten by a neighbouring grid parameter everywhere.
    * binary-action myopic regime: convergence of action frequencies is
      taken for granted with two actions and a myopic agent.
"""

DEFAULT_ADVERSARY_EPS = 1e-4

SENSITIVITY_EPS = (1e-2, 1e-4)

class VerdictKind(IntEnum):
    GloballyRobust = 0
    NotGloballyRobust = 1
    ConstrainedLocallyRobust = 2
    NotConstrainedLocallyRobust = 3
    Inconclusive = 4
    LocallyRobust = 5
    NotLocallyRobust = 6

class Certainty(IntEnum):
    certified = 0
    empirical = 1
    undetermined = 2

@dataclass
class MonteCarloBudget:

    paths : int = 1000
    horizon : int = 1000
    seed : int = 0
    threads : int = 1
    eps : float = 0.05

@dataclass
class Verdict:

    kind : VerdictKind
    basis : List[str]
    certainty : Certainty
    witnesses : List[Dict[str, Any]] = field(default_factory = list)
    equilibria : List[EquilibriumRecord] = field(default_factory = list)
    monte_carlo : List[Dict[str, Any]] = field(default_factory = list)
    adversary : Optional[Dict[str, Any]] = None
    warnings : List[str] = field(default_factory = list)

    def __post_init__(self):

        if not self.basis:
            raise ValueError('A verdict must cite at least one rule')

def correct_parameters(problem : DecisionProblem, model : SubjectiveModel) -> List[int]:

    return [omega_index for omega_index in range(model.parameter_count)
        if all(same_distribution(problem.true_dgp[action_index], model.kernel[action_index][omega_index])
            for action_index in range(problem.action_count))]

def _record_witness(problem : DecisionProblem, model : SubjectiveModel, record : EquilibriumRecord) -> Dict[str, Any]:

    return {
        'strategy': dict(zip(problem.action_names, record.strategy.probs)),
        'minimizers': [list(model.parameters[index]) for index in record.minimizers],
        'description': record.describe(problem)
    }

"""
    Global robustness, by a decision tree over the equilibria.
"""

def global_verdict(problem : DecisionProblem, model : SubjectiveModel, budget : MonteCarloBudget = MonteCarloBudget(),
                   grid_resolution : int = 20, records : Optional[List[EquilibriumRecord]] = None,
                   policy_mode : PolicyMode = PolicyMode()) -> Verdict:

    correct = correct_parameters(problem, model)

    if correct:
        return Verdict(VerdictKind.GloballyRobust, ['correct-specification'], Certainty.certified,
            [{'parameter': list(model.parameters[correct[0]])}], records or [])

    records = records if records is not None else find_equilibria(problem, model, grid_resolution)

    sce_records = [record for record in records if record.sce]

    if not sce_records:

        adversary = convex_mix_model(model, problem, 0.5)

        return Verdict(VerdictKind.NotGloballyRobust, ['sce-necessity'], Certainty.certified,
            [_record_witness(problem, model, record) for record in records], records,
            adversary = {'model': adversary.id, 'construction': 'convex mixture with the truth', 'eps': 0.5})

    for position, record in enumerate(records):

        if record.sce and record.uniformly_quasi_strict:

            records = list(records)
            records[position] = estimate_p_absorbing(problem, model, record)

            return Verdict(VerdictKind.GloballyRobust, ['uniformly-quasi-strict-sce'], Certainty.certified,
                [_record_witness(problem, model, record)], records)

    summaries = []

    for position, record in enumerate(records):

        if not record.sce:
            continue

        record = estimate_p_absorbing(problem, model, record, budget.eps, budget.paths, budget.horizon, budget.seed,
            budget.threads, policy_mode)

        records = list(records)
        records[position] = record

        absorption = record.p_absorbing

        summaries.append({'equilibrium': record.describe(problem), 'estimate': absorption.estimate,
            'interval': absorption.interval, 'paths': absorption.paths, 'horizon': absorption.horizon, 'eps': absorption.eps,
            'prior_mass': absorption.prior_mass, 'half_count': absorption.half_count, 'late_exits': absorption.late_exits})

        if absorption.is_p_absorbing:
            return Verdict(VerdictKind.GloballyRobust, ['empirical-p-absorption'], Certainty.empirical,
                [_record_witness(problem, model, record)], records, summaries)

    return Verdict(VerdictKind.Inconclusive, ['no-certificate'], Certainty.undetermined,
        [_record_witness(problem, model, record) for record in sce_records], records, summaries)

LOCAL_KINDS = {
    VerdictKind.GloballyRobust: VerdictKind.LocallyRobust,
    VerdictKind.NotGloballyRobust: VerdictKind.NotLocallyRobust
}

def local_verdict(problem : DecisionProblem, model : SubjectiveModel, budget : MonteCarloBudget = MonteCarloBudget(),
                  grid_resolution : int = 20, policy_mode : PolicyMode = PolicyMode()) -> Verdict:

    """
        Unconstrained local robustness coincides with global robustness.
    """

    verdict = global_verdict(problem, model, budget, grid_resolution, policy_mode = policy_mode)

    return replace(verdict, kind = LOCAL_KINDS.get(verdict.kind, verdict.kind),
        basis = ['unconstrained-local-equals-global'] + verdict.basis)

"""
    The prior-mass gate against a single competitor, and the adversary
    that beats a prior failing it: the model restricted to the minimizers
    of its p-absorbing self-confirming equilibria, plus one parameter
    prescribing the truth with a small mass.
"""

@dataclass
class GateResult:

    passes : bool
    mass : float
    bound : float
    union : Tuple[int, ...]
    adversary : SubjectiveModel
    adversary_prior : Belief

def _is_p_absorbing(record : EquilibriumRecord) -> bool:

    if record.p_absorbing is not None:
        return record.p_absorbing.is_p_absorbing

    return record.uniformly_quasi_strict

def sce_mass_adversary(problem : DecisionProblem, model : SubjectiveModel, prior : Belief, union : Sequence[int],
                       eps : float = DEFAULT_ADVERSARY_EPS) -> Tuple[SubjectiveModel, Belief]:

    truth_point = tuple(float(value) for value in np.array(model.parameters).max(axis = 0) + 1)

    adversary_id = '%s~adversary' % model.id

    if not union:

        adversary = SubjectiveModel(adversary_id, (truth_point,), tuple((dist,) for dist in problem.true_dgp))

        return adversary, Belief(adversary_id, (1.0,))

    union = sorted(set(union))

    adversary = augment_model(restrict_model(model, union, adversary_id), [(truth_point, problem.true_dgp)], adversary_id)

    shares = prior.array[union]

    return adversary, Belief.from_weights(adversary_id, list((1 - eps) * shares / shares.sum()) + [eps])

def prior_mass_gate(problem : DecisionProblem, model : SubjectiveModel, prior : Belief, alpha : float,
                    sce_set : Sequence[EquilibriumRecord], eps : float = DEFAULT_ADVERSARY_EPS) -> GateResult:

    if not alpha > 1:
        raise ConfigError('The switching threshold must exceed 1, got %r' % alpha)

    union = tuple(sorted({index for record in sce_set if record.sce and _is_p_absorbing(record) for index in record.minimizers}))

    mass = prior.mass_on(union) if union else 0.0

    adversary, adversary_prior = sce_mass_adversary(problem, model, prior, union, eps)

    info('Prior mass %.6g on the p-absorbing SCE minimizers against a bound of %.6g' % (mass, 1 / alpha))

    return GateResult(bool(union) and mass >= 1 / alpha, mass, 1 / alpha, union, adversary, adversary_prior)

def adversary_switch_fraction(problem : DecisionProblem, model : SubjectiveModel, prior : Belief, adversary : SubjectiveModel,
                              adversary_prior : Belief, alpha : float, budget : MonteCarloBudget = MonteCarloBudget(),
                              policy_mode : PolicyMode = PolicyMode()) -> Dict[str, Any]:

    """
        Fraction of switcher paths with at least one switch to the
        adversary by the horizon.
    """

    policies = {}

    if policy_mode.kind != PolicyKind.myopic:
        policies[model.id] = solve_policy(problem, model, policy_mode)

    config = SwitcherConfig(problem, model, (adversary,), {model.id: prior, adversary.id: adversary_prior}, policies, alpha)

    summary = monte_carlo(config, budget.paths, budget.horizon, budget.seed, Diagnostics(keep_records = False), budget.threads)

    switched = int(round(summary.ever_switched * budget.paths))

    return {'adversary': adversary.id, 'paths': budget.paths, 'horizon': budget.horizon, 'fraction': summary.ever_switched,
        'interval': wilson_interval(switched, budget.paths), 'persist_frequency': summary.persist_frequency}

def adversary_sensitivity(problem : DecisionProblem, model : SubjectiveModel, prior : Belief, alpha : float,
                          sce_set : Sequence[EquilibriumRecord], budget : MonteCarloBudget = MonteCarloBudget(),
                          eps_values : Sequence[float] = SENSITIVITY_EPS) -> List[Dict[str, Any]]:

    rows = []

    for eps in eps_values:

        gate = prior_mass_gate(problem, model, prior, alpha, sce_set, eps)

        row = adversary_switch_fraction(problem, model, prior, gate.adversary, gate.adversary_prior, alpha, budget)
        row['eps'] = eps

        rows.append(row)

    return rows

"""
    Constrained local robustness against a q-family.
"""

def kl_witness_adversary(problem : DecisionProblem, family : QFamily, model : SubjectiveModel, prior : Belief,
                         witnesses : Sequence, eps : float = DEFAULT_ADVERSARY_EPS) -> Tuple[SubjectiveModel, Belief]:

    """
        The model's parameters plus the violating grid witnesses, which
        share a total prior mass of eps evenly.
    """

    adversary_id = '%s~local' % model.id

    points = [as_point(point) for point in witnesses if as_point(point) not in model.parameters]
    points = list(dict.fromkeys(points))

    adversary = augment_model(model, [(point, family.kernel_row(problem, point)) for point in points], adversary_id)

    if adversary is model:
        return SubjectiveModel(adversary_id, model.parameters, model.kernel), Belief(adversary_id, prior.probs)

    weights = list((1 - eps) * prior.array) + [eps / len(points)] * len(points)

    return adversary, Belief.from_weights(adversary_id, weights)

def constrained_verdict(problem : DecisionProblem, family : QFamily, model : SubjectiveModel, assume_convergence : bool = False,
                        budget : MonteCarloBudget = MonteCarloBudget(), grid_resolution : int = 20, eps : Optional[float] = None,
                        d_candidates : Sequence[float] = DEFAULT_D_CANDIDATES, prior : Optional[Belief] = None,
                        policy_mode : PolicyMode = PolicyMode(), records : Optional[List[EquilibriumRecord]] = None) -> Verdict:

    eps = family.default_radius if eps is None else eps

    records = list(records) if records is not None else find_equilibria(problem, model, grid_resolution)

    basis_extra = []

    if not assume_convergence and problem.action_count == 2 and policy_mode.kind == PolicyKind.myopic:
        assume_convergence = True
        basis_extra.append('binary-action myopic regime')

    summaries = []

    for position, record in enumerate(records):

        if not record.strategy.is_pure:
            continue

        record = check_local_dominance(problem, family, model, record, eps, d_candidates)

        if record.family_checks.locally_dominant:

            record = estimate_p_absorbing(problem, model, record, budget.eps, budget.paths, budget.horizon, budget.seed,
                budget.threads, policy_mode)

            if not record.p_absorbing.certified:
                summaries.append({'equilibrium': record.describe(problem), 'estimate': record.p_absorbing.estimate,
                    'interval': record.p_absorbing.interval, 'eps': record.p_absorbing.eps, 'prior_mass': record.p_absorbing.prior_mass,
                    'late_exits': record.p_absorbing.late_exits})

        records[position] = record

        if record.family_checks.locally_dominant and record.p_absorbing.is_p_absorbing:

            certainty = Certainty.certified if record.p_absorbing.certified else Certainty.empirical

            witness = _record_witness(problem, model, record)
            witness['d'] = record.family_checks.dominance_order

            return Verdict(VerdictKind.ConstrainedLocallyRobust, ['local-dominance',
                'uniformly-quasi-strict-sce' if record.p_absorbing.certified else 'empirical-p-absorption'],
                certainty, [witness], records, summaries)

    if assume_convergence:

        records = [check_locally_kl_minimizing(problem, family, model, record, eps) for record in records]

        if records and not any(record.family_checks.locally_kl_minimizing for record in records):

            witnesses = [witness for record in records for witness in record.family_checks.kl_witnesses]

            adversary, adversary_prior = kl_witness_adversary(problem, family, model, prior or Belief.uniform(model),
                [witness['point'] for witness in witnesses])

            warnings = ['The adversary covers the equilibria with a finite grid of step %s; its sufficiency at this resolution is not established' %
                ', '.join('%g' % step for step in family.steps)]

            for text in warnings:
                warning(text)

            return Verdict(VerdictKind.NotConstrainedLocallyRobust, ['local-kl-minimization-failure'] + basis_extra,
                Certainty.certified, [{'point': list(witness['point']), 'improvement': witness['improvement'],
                    'strategy': dict(zip(problem.action_names, witness['strategy']))} for witness in witnesses],
                records, summaries, {'model': adversary.id, 'added_points': adversary.parameter_count - model.parameter_count,
                    'eps': DEFAULT_ADVERSARY_EPS}, warnings)

    return Verdict(VerdictKind.Inconclusive, ['no-certificate'] + basis_extra, Certainty.undetermined,
        [_record_witness(problem, model, record) for record in records], records, summaries)

"""
    Several competing models: persistence against K of them is guaranteed
    globally when alpha > K, and locally with moment order d when
    alpha > K ** (1 / d).
"""

def multi_model_gate(alpha : float, competitors : int, d : Optional[float] = None) -> Dict[str, bool]:

    if competitors < 1:
        raise ConfigError('At least one competing model is required, got %d' % competitors)

    return {
        'global_ok': alpha > competitors,
        'constrained_ok': d is not None and alpha > competitors ** (1 / d)
    }
