#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, Optional

from ..scenarios import build
from ..scenarios._base_scenario import Scenario
from ._base_input import BaseInput

"""
    This class provides one of the built-in scenarios, by name, with
    optional parameter overrides.
"""

class BuiltinScenarioInput(BaseInput):

    def __init__(self, scenario_name : str, parameters : Optional[Dict[str, Any]] = None):

        self.scenario_name = scenario_name
        self.parameters = dict(parameters or {})

        super().__init__()

    def load(self) -> Scenario:

        return build(self.scenario_name, self.parameters)

    def describe(self) -> str:

        if self.parameters:
            return 'the built-in scenarios, with %s' % ', '.join('%s=%r' % item for item in sorted(self.parameters.items()))

        return 'the built-in scenarios'
