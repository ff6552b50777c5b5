#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, List, Optional
from json import JSONDecodeError, dumps, loads
from logging import debug

from ..engine.env import (AbsOutcome, Categorical, CustomUtility, DecisionProblem, Gaussian, LinearInOutcome, Mixture,
    OutcomeDistribution, Product, TableUtility, UtilityFn)
from ..engine.errors import ConfigError, MisbeliefError
from ..engine.model import Belief, QFamily, SubjectiveModel
from ..engine.policy import PolicyKind, PolicyMode
from ..scenarios._base_scenario import ExpectedAssertion, Provenance, Scenario
from ..scenarios.kernels import family_arguments, make_family

"""
    Reading and writing scenarios as JSON documents. The layout is
    described in "docs/Scenario JSON schema.md".

    Decoding errors are raised as ConfigError with the JSON path of the
    offending value, e.g. "$.models.theta.kernel[0][2].variance". Floats
    are written with the shortest representation that reads back exactly,
    and keys are sorted, so a dump is stable and diffable.
"""

FORMAT_VERSION = 1

"""
    Encoding.
"""

def encode_distribution(dist : OutcomeDistribution) -> Dict[str, Any]:

    if isinstance(dist, Gaussian):
        return {'type': 'gaussian', 'mean': dist.mean_value, 'variance': dist.variance}
    elif isinstance(dist, Categorical):
        return {'type': 'categorical', 'probs': list(dist.probs)}
    elif isinstance(dist, Product):
        return {'type': 'product', 'components': [encode_distribution(component) for component in dist.components]}
    elif isinstance(dist, Mixture):
        return {'type': 'mixture', 'weights': list(dist.weights),
            'components': [encode_distribution(component) for component in dist.components]}

    raise ConfigError('Cannot serialize the distribution %r' % (dist,))

def encode_utility(utility : UtilityFn) -> Dict[str, Any]:

    if isinstance(utility, LinearInOutcome):
        return {'type': 'linear', 'coordinate': utility.coordinate, 'action_cost': list(utility.action_cost)}
    elif isinstance(utility, AbsOutcome):
        return {'type': 'abs', 'coordinate': utility.coordinate}
    elif isinstance(utility, TableUtility):
        return {'type': 'table', 'rows': [list(row) for row in utility.rows]}
    elif isinstance(utility, CustomUtility):
        return {'type': 'custom', 'tag': utility.tag, 'parameters': dict(utility.parameters)}

    raise ConfigError('Cannot serialize the utility %r' % (utility,))

def encode_problem(problem : DecisionProblem) -> Dict[str, Any]:

    return {
        'actions': list(problem.actions),
        'action_names': list(problem.action_names),
        'true_dgp': [encode_distribution(dist) for dist in problem.true_dgp],
        'utility': encode_utility(problem.utility),
        'discount': problem.discount
    }

def encode_model(model : SubjectiveModel) -> Dict[str, Any]:

    return {
        'parameters': [list(point) for point in model.parameters],
        'kernel': [[encode_distribution(dist) for dist in row] for row in model.kernel]
    }

def encode_family(family : QFamily) -> Dict[str, Any]:

    kernel_ref, kernel_params, low, high, steps, predicate_ref = family_arguments(family)

    return {'kernel': kernel_ref, 'kernel_params': kernel_params, 'low': list(low), 'high': list(high),
        'steps': list(steps), 'predicate': predicate_ref}

def encode_policy_mode(mode : PolicyMode) -> Dict[str, Any]:

    return {'kind': mode.kind.name, 'resolution': mode.resolution, 'discount': mode.discount}

def encode_assertion(assertion : ExpectedAssertion) -> Dict[str, Any]:

    return {'check': assertion.check, 'provenance': assertion.provenance.name, 'arguments': assertion.arguments,
        'description': assertion.description}

def encode_scenario(scenario : Scenario) -> Dict[str, Any]:

    return {
        'format_version': FORMAT_VERSION,
        'name': scenario.name,
        'description': scenario.description,
        'problem': encode_problem(scenario.problem),
        'models': {model_id: encode_model(model) for model_id, model in scenario.models.items()},
        'initial': scenario.initial,
        'priors': {model_id: list(belief.probs) for model_id, belief in scenario.priors.items()},
        'competing': list(scenario.competing),
        'observers': list(scenario.observers),
        'nature': scenario.nature,
        'family': encode_family(scenario.family) if scenario.family is not None else None,
        'alpha': scenario.alpha,
        'seed': scenario.seed,
        'policy_mode': encode_policy_mode(scenario.policy_mode),
        'assume_convergence': scenario.assume_convergence,
        'parameters': scenario.parameters,
        'derived': scenario.derived,
        'expected': [encode_assertion(assertion) for assertion in scenario.expected],
        'notes': list(scenario.notes)
    }

def dump_scenario(scenario : Scenario) -> str:

    return dumps(encode_scenario(scenario), sort_keys = True, indent = 2) + '\n'

"""
    Decoding. Every helper receives the JSON path of the value it reads.
"""

def _require(data : Dict[str, Any], key : str, path : str) -> Any:

    if not isinstance(data, dict):
        raise ConfigError('%s: expected an object, got %s' % (path, type(data).__name__))

    if key not in data:
        raise ConfigError('%s: missing key "%s"' % (path, key))

    return data[key]

def _list(value : Any, path : str) -> List[Any]:

    if not isinstance(value, list):
        raise ConfigError('%s: expected a list, got %s' % (path, type(value).__name__))

    return value

def _number(value : Any, path : str) -> float:

    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError('%s: expected a number, got %r' % (path, value))

    return float(value)

def _numbers(value : Any, path : str) -> List[float]:

    return [_number(item, '%s[%d]' % (path, index)) for index, item in enumerate(_list(value, path))]

def decode_distribution(data : Dict[str, Any], path : str = '$') -> OutcomeDistribution:

    kind = _require(data, 'type', path)

    try:

        if kind == 'gaussian':
            return Gaussian(_number(_require(data, 'mean', path), path + '.mean'),
                _number(_require(data, 'variance', path), path + '.variance'))
        elif kind == 'categorical':
            return Categorical(tuple(_numbers(_require(data, 'probs', path), path + '.probs')))
        elif kind == 'product':
            components = _list(_require(data, 'components', path), path + '.components')
            return Product(tuple(decode_distribution(component, '%s.components[%d]' % (path, index))
                for index, component in enumerate(components)))
        elif kind == 'mixture':
            components = _list(_require(data, 'components', path), path + '.components')
            return Mixture(tuple(_numbers(_require(data, 'weights', path), path + '.weights')),
                tuple(decode_distribution(component, '%s.components[%d]' % (path, index)) for index, component in enumerate(components)))

    except ConfigError:
        raise
    except MisbeliefError as exception:
        raise ConfigError('%s: %s' % (path, exception))

    raise ConfigError('%s.type: unknown distribution type %r' % (path, kind))

def decode_utility(data : Dict[str, Any], path : str = '$') -> UtilityFn:

    kind = _require(data, 'type', path)

    try:

        if kind == 'linear':
            return LinearInOutcome(int(data.get('coordinate', 0)), tuple(_numbers(data.get('action_cost', []), path + '.action_cost')))
        elif kind == 'abs':
            return AbsOutcome(int(data.get('coordinate', 0)))
        elif kind == 'table':
            rows = _list(_require(data, 'rows', path), path + '.rows')
            return TableUtility(tuple(tuple(_numbers(row, '%s.rows[%d]' % (path, index))) for index, row in enumerate(rows)))
        elif kind == 'custom':
            return CustomUtility(_require(data, 'tag', path), tuple(data.get('parameters', {}).items()))

    except ConfigError:
        raise
    except MisbeliefError as exception:
        raise ConfigError('%s: %s' % (path, exception))

    raise ConfigError('%s.type: unknown utility type %r' % (path, kind))

def decode_problem(data : Dict[str, Any], path : str = '$') -> DecisionProblem:

    true_dgp = _list(_require(data, 'true_dgp', path), path + '.true_dgp')

    try:
        return DecisionProblem(
            actions = tuple(_numbers(_require(data, 'actions', path), path + '.actions')),
            true_dgp = tuple(decode_distribution(dist, '%s.true_dgp[%d]' % (path, index)) for index, dist in enumerate(true_dgp)),
            utility = decode_utility(_require(data, 'utility', path), path + '.utility'),
            discount = _number(data.get('discount', 0.0), path + '.discount'),
            action_names = tuple(str(name) for name in data.get('action_names', []))
        )
    except ConfigError:
        raise
    except MisbeliefError as exception:
        raise ConfigError('%s: %s' % (path, exception))

def decode_model(model_id : str, data : Dict[str, Any], path : str = '$') -> SubjectiveModel:

    parameters = _list(_require(data, 'parameters', path), path + '.parameters')
    kernel = _list(_require(data, 'kernel', path), path + '.kernel')

    rows = []

    for action_index, row in enumerate(kernel):
        rows.append(tuple(decode_distribution(dist, '%s.kernel[%d][%d]' % (path, action_index, omega_index))
            for omega_index, dist in enumerate(_list(row, '%s.kernel[%d]' % (path, action_index)))))

    try:
        return SubjectiveModel(model_id, tuple(tuple(_numbers(point, '%s.parameters[%d]' % (path, index)))
            for index, point in enumerate(parameters)), tuple(rows))
    except MisbeliefError as exception:
        raise ConfigError('%s: %s' % (path, exception))

def decode_family(data : Dict[str, Any], path : str = '$') -> QFamily:

    try:
        return make_family(_require(data, 'kernel', path), data.get('kernel_params', {}),
            _numbers(_require(data, 'low', path), path + '.low'), _numbers(_require(data, 'high', path), path + '.high'),
            _numbers(_require(data, 'steps', path), path + '.steps'), data.get('predicate', '') or '')
    except ConfigError:
        raise
    except MisbeliefError as exception:
        raise ConfigError('%s: %s' % (path, exception))

def decode_policy_mode(data : Optional[Dict[str, Any]], path : str = '$') -> PolicyMode:

    if data is None:
        return PolicyMode()

    kind = data.get('kind', 'myopic')

    if kind not in PolicyKind.__members__:
        raise ConfigError('%s.kind: unknown policy kind %r (known: %s)' % (path, kind, ', '.join(PolicyKind.__members__)))

    discount = data.get('discount')

    return PolicyMode(PolicyKind[kind], int(data.get('resolution', 0)),
        None if discount is None else _number(discount, path + '.discount'))

def decode_assertion(data : Dict[str, Any], path : str = '$') -> ExpectedAssertion:

    provenance = data.get('provenance') if isinstance(data, dict) else None

    if provenance is None:
        raise ConfigError('%s: untagged assertion, a provenance among %s is required' % (path, ', '.join(Provenance.__members__)))

    if provenance not in Provenance.__members__:
        raise ConfigError('%s.provenance: unknown provenance %r (known: %s)' % (path, provenance, ', '.join(Provenance.__members__)))

    return ExpectedAssertion(_require(data, 'check', path), Provenance[provenance], dict(data.get('arguments', {})),
        data.get('description', ''))

def decode_scenario(data : Dict[str, Any], path : str = '$') -> Scenario:

    version = _require(data, 'format_version', path)

    if version != FORMAT_VERSION:
        raise ConfigError('%s.format_version: unsupported version %r, expected %d' % (path, version, FORMAT_VERSION))

    problem = decode_problem(_require(data, 'problem', path), path + '.problem')

    models_data = _require(data, 'models', path)

    if not isinstance(models_data, dict) or not models_data:
        raise ConfigError('%s.models: expected a nonempty object' % path)

    models = {model_id: decode_model(model_id, model_data, '%s.models.%s' % (path, model_id))
        for model_id, model_data in models_data.items()}

    priors = {}

    for model_id, weights in _require(data, 'priors', path).items():
        try:
            priors[model_id] = Belief(model_id, tuple(_numbers(weights, '%s.priors.%s' % (path, model_id))))
        except MisbeliefError as exception:
            raise ConfigError('%s.priors.%s: %s' % (path, model_id, exception))

    family = data.get('family')

    expected = [decode_assertion(assertion, '%s.expected[%d]' % (path, index))
        for index, assertion in enumerate(_list(data.get('expected', []), path + '.expected'))]

    try:
        scenario = Scenario(
            name = str(_require(data, 'name', path)),
            problem = problem,
            models = models,
            initial = _require(data, 'initial', path),
            priors = priors,
            competing = tuple(data.get('competing', [])),
            observers = tuple(data.get('observers', [])),
            nature = data.get('nature'),
            family = decode_family(family, path + '.family') if family is not None else None,
            alpha = _number(data.get('alpha', 2.0), path + '.alpha'),
            seed = int(data.get('seed', 0)),
            policy_mode = decode_policy_mode(data.get('policy_mode'), path + '.policy_mode'),
            assume_convergence = bool(data.get('assume_convergence', False)),
            parameters = dict(data.get('parameters', {})),
            derived = {key: float(value) for key, value in data.get('derived', {}).items()},
            expected = expected,
            description = data.get('description', ''),
            notes = list(data.get('notes', []))
        )
    except ConfigError:
        raise
    except MisbeliefError as exception:
        raise ConfigError('%s: %s' % (path, exception))

    debug('Decoded scenario "%s" with models %s' % (scenario.name, ', '.join(models)))

    return scenario

def load_scenario(text : str, source : str = '<string>') -> Scenario:

    try:
        data = loads(text)
    except JSONDecodeError as exception:
        raise ConfigError('%s: malformed JSON at line %d, column %d: %s' % (source, exception.lineno, exception.colno, exception.msg))

    try:
        return decode_scenario(data)
    except ConfigError as exception:
        raise ConfigError('%s: %s' % (source, exception))
