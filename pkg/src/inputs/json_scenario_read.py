#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from ..schema.scenario_json import load_scenario
from ..scenarios._base_scenario import Scenario
from ._base_input import BaseInput

"""
    This class implements reading scenario files, as produced by the
    "scenario dump" command or written by hand (see "docs/Scenario JSON
    schema.md").
"""

class JsonScenarioReader(BaseInput):

    def __init__(self, json_file):

        self.json_file = json_file

        super().__init__()

    def load(self) -> Scenario:

        text = self.json_file.read()

        return load_scenario(text, getattr(self.json_file, 'name', '<scenario file>'))

    def describe(self) -> str:

        return getattr(self.json_file, 'name', 'a scenario file')

    def dispose(self, disposing = True):

        if not self.json_file.closed:
            self.json_file.close()

        super().dispose(disposing)
