#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, List, Optional, Sequence, Tuple
from dataclasses import dataclass, field
from logging import debug, info, warning
from enum import IntEnum

from ..engine.dynamics import SwitcherConfig
from ..engine.env import DecisionProblem
from ..engine.errors import ScenarioError
from ..engine.model import Belief, QFamily, SubjectiveModel, as_point, check_prior
from ..engine.policy import PolicyKind, PolicyMode, solve_policy

"""
    A scenario bundles everything a command needs: the decision problem,
    the subjective models (the initial one, its competitors, observers and
    an optional nature model), their priors, an optional q-family, the
    default switching threshold, seed and policy mode, and a list of
    expected assertions.

    Every expected assertion is tagged with where its expected value comes
    from: stated in the source material (PAPER), true by construction
    (TRIVIAL), or computed by hand from the scenario's numbers (DERIVED).
    Untagged assertions are refused.
"""

class Provenance(IntEnum):
    PAPER = 0
    TRIVIAL = 1
    DERIVED = 2

@dataclass(frozen = True)
class ExpectedAssertion:

    check : str
    provenance : Provenance
    arguments : Dict[str, Any] = field(default_factory = dict, hash = False)
    description : str = ''

    def __post_init__(self):

        if not isinstance(self.provenance, Provenance):
            raise ScenarioError('Assertion "%s" carries no provenance tag' % (self.description or self.check))

@dataclass(eq = False)
class Scenario:

    name : str
    problem : DecisionProblem
    models : Dict[str, SubjectiveModel]
    initial : str
    priors : Dict[str, Belief]
    competing : Tuple[str, ...] = ()
    observers : Tuple[str, ...] = ()
    nature : Optional[str] = None
    family : Optional[QFamily] = None
    alpha : float = 2.0
    seed : int = 0
    policy_mode : PolicyMode = PolicyMode()
    assume_convergence : bool = False
    parameters : Dict[str, Any] = field(default_factory = dict)
    derived : Dict[str, float] = field(default_factory = dict)
    expected : List[ExpectedAssertion] = field(default_factory = list)
    description : str = ''
    notes : List[str] = field(default_factory = list)

    def __post_init__(self):

        self.competing = tuple(self.competing)
        self.observers = tuple(self.observers)

        for model_id, model in self.models.items():

            if model.id != model_id:
                raise ScenarioError('Model registered as "%s" is named "%s"' % (model_id, model.id))

            model.check_against(self.problem)

            if model_id not in self.priors:
                raise ScenarioError('Scenario "%s" gives no prior for model "%s"' % (self.name, model_id))

            check_prior(model, self.priors[model_id])

        for model_id in (self.initial,) + self.competing + self.observers + ((self.nature,) if self.nature else ()):
            if model_id not in self.models:
                raise ScenarioError('Scenario "%s" refers to the unknown model "%s"' % (self.name, model_id))

        if not self.alpha > 1:
            raise ScenarioError('The switching threshold must exceed 1, got %r' % self.alpha)

        for assertion in self.expected:
            if not isinstance(assertion, ExpectedAssertion):
                raise ScenarioError('Scenario "%s" holds an untagged assertion: %r' % (self.name, assertion))

        if self.family is not None:
            for point in self.initial_model.parameters:
                if not self.family.contains(point):
                    warning('Parameter %r of the initial model is not a point of the family grid' % (point,))

    @property
    def initial_model(self) -> SubjectiveModel:

        return self.models[self.initial]

    @property
    def initial_prior(self) -> Belief:

        return self.priors[self.initial]

    def switcher_config(self, alpha : Optional[float] = None, competing : Optional[Sequence[str]] = None,
                        priors : Optional[Dict[str, Belief]] = None, dogmatic : bool = False,
                        observers : Optional[Sequence[str]] = None, nature : Optional[str] = None) -> SwitcherConfig:

        """
            The simulation configuration of this scenario, with optional
            overrides of the threshold, the competitor list and priors.
        """

        competing = () if dogmatic else tuple(self.competing if competing is None else competing)
        observers = tuple(self.observers if observers is None else observers)
        nature = self.nature if nature is None else nature

        merged_priors = dict(self.priors)
        merged_priors.update(priors or {})

        tracked = (self.initial,) + competing + observers

        policies = {}

        if self.policy_mode.kind != PolicyKind.myopic:
            for model_id in (self.initial,) + competing:
                policies[model_id] = solve_policy(self.problem, self.models[model_id], self.policy_mode)

        return SwitcherConfig(
            problem = self.problem,
            initial_model = self.initial_model,
            competing = tuple(self.models[model_id] for model_id in competing),
            priors = {model_id: merged_priors[model_id] for model_id in tracked + ((nature,) if nature else ())},
            policies = policies,
            alpha = self.alpha if alpha is None else alpha,
            observers = tuple(self.models[model_id] for model_id in observers),
            nature = self.models[nature] if nature else None
        )

def model_from_kernel(model_id : str, actions : Sequence[float], points : Sequence[Any], kernel_fn) -> SubjectiveModel:

    points = [as_point(point) for point in points]

    return SubjectiveModel(model_id, tuple(points), tuple(tuple(kernel_fn(action, point) for point in points) for action in actions))

class BaseScenario:

    """
        Builders inherit from this class, declare their name, a one-line
        description and their default parameters, and implement construct().
    """

    name : str = None
    description : str = None
    defaults : Dict[str, Any] = {}

    def build(self, parameters : Optional[Dict[str, Any]] = None) -> Scenario:

        parameters = dict(parameters or {})

        unknown = sorted(set(parameters) - set(self.defaults))

        if unknown:
            raise ScenarioError('Scenario "%s" has no parameter %s (known: %s)' % (self.name, ', '.join(unknown),
                ', '.join(sorted(self.defaults)) or 'none'))

        merged = dict(self.defaults)
        merged.update(parameters)

        debug('Building scenario "%s" with %r' % (self.name, merged))

        scenario = self.construct(merged)

        scenario.parameters = merged
        scenario.description = scenario.description or self.description

        info('Scenario "%s": %d actions, %d models, %d expected assertions' % (self.name,
            scenario.problem.action_count, len(scenario.models), len(scenario.expected)))

        return scenario

    def construct(self, parameters : Dict[str, Any]) -> Scenario:

        raise NotImplementedError
