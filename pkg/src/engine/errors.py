#!/usr/bin/python3
#-*- encoding: Utf-8 -*-

"""
    Exceptions raised when an object would be built in violation of its
    invariants, or when a configuration cannot be honoured.

    They all derive from ValueError, so that code validating user input
    may catch the builtin.
"""

class MisbeliefError(ValueError):
    pass

class InvalidDistributionError(MisbeliefError):
    pass

class OutcomeMismatchError(MisbeliefError):
    pass

class InvalidModelError(MisbeliefError):
    pass

class InvalidBeliefError(MisbeliefError):
    pass

class PolicyError(MisbeliefError):
    pass

class ScenarioError(MisbeliefError):
    pass

class ConfigError(MisbeliefError):
    pass
