#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Any, Dict, Optional
from re import match, split, Match
from json import JSONDecodeError, loads
from enum import IntEnum

class ScenarioArgType(IntEnum):
    builtin = 1
    builtin_with_parameters = 2
    json_file = 3

SCENARIO_ARG_REGEX_TO_MODE = {
    r'.+\.json(\.gz)?': ScenarioArgType.json_file,
    r'([a-z][a-z0-9_]*)': ScenarioArgType.builtin,
    r'([a-z][a-z0-9_]*):([a-z_][a-z0-9_]*=.+)': ScenarioArgType.builtin_with_parameters
}

def parse_value(text : str) -> Any:

    """
        Parameter values are read as JSON when they parse ("0.3", "[1, 2]",
        "true"), as plain strings otherwise.
    """

    try:
        return loads(text)
    except JSONDecodeError:
        return text

class ScenarioArgParser:

    """
        Possible syntaxes for the --scenario argument:

          - "NAME": a built-in scenario with its default parameters
          - "NAME:key=value[,key=value...]": a built-in scenario with
            overridden parameters, e.g. "team:believed_ability=0.3"
          - "PATH.json" or "PATH.json.gz": a scenario file
    """

    arg_type : Optional[ScenarioArgType] = None

    scenario_name : Optional[str] = None
    parameters : Dict[str, Any] = None
    json_path : Optional[str] = None

    def __init__(self, arg : str):

        self.parameters = {}

        regex_result : Optional[Match] = None
        syntax_type : Optional[ScenarioArgType] = None

        for possible_syntax, arg_type in SCENARIO_ARG_REGEX_TO_MODE.items():
            regex_result = match('^' + possible_syntax + '$', arg)
            if regex_result:
                syntax_type = arg_type
                break

        if syntax_type:
            self.arg_type = syntax_type

            if syntax_type == ScenarioArgType.json_file:
                self.json_path = regex_result.group(0)
            elif syntax_type == ScenarioArgType.builtin:
                self.scenario_name = regex_result.group(1)
            elif syntax_type == ScenarioArgType.builtin_with_parameters:
                self.scenario_name = regex_result.group(1)
                for assignment in split(r',(?=[a-z_][a-z0-9_]*=)', regex_result.group(2)):
                    key, value = assignment.split('=', 1)
                    self.parameters[key] = parse_value(value)
