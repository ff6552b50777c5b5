#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, List, Optional, Tuple, Type

from ..engine.errors import ScenarioError
from ._base_scenario import BaseScenario, Scenario

from .overconfidence1 import Overconfidence1
from .overconfidence2 import Overconfidence2
from .appendix_c1 import AppendixC1
from .appendix_c2 import AppendixC2
from .overfitting import Overfitting
from .investment import Investment
from .mixed_sce import MixedSce
from .example1 import Example1
from .team import Team

"""
    Registry of the built-in scenarios, by name.
"""

ALL_SCENARIO_CLASSES : List[Type[BaseScenario]] = [
    Overconfidence1,
    Overconfidence2,
    Example1,
    MixedSce,
    Overfitting,
    AppendixC1,
    AppendixC2,
    Investment,
    Team
]

SCENARIOS : Dict[str, Type[BaseScenario]] = {cls.name: cls for cls in ALL_SCENARIO_CLASSES}

def build(name : str, parameters : Optional[Dict[str, Any]] = None) -> Scenario:

    if name not in SCENARIOS:
        raise ScenarioError('Unknown scenario "%s" (known: %s)' % (name, ', '.join(sorted(SCENARIOS))))

    return SCENARIOS[name]().build(parameters)

def list_scenarios() -> List[Tuple[str, str]]:

    return [(cls.name, cls.description) for cls in ALL_SCENARIO_CLASSES]
