#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from logging import debug, info, warning, error
from traceback import format_exc
from typing import List, Optional

from ..engine.errors import MisbeliefError
from ..scenarios._base_scenario import Scenario

"""
    With misbelief, one or more modules compute and write reports about
    a scenario. They do so through exactly one input (a built-in scenario
    or a JSON scenario file).

    An input is materialized through a class. All inputs will inherit from
    this base class, and implement load() returning the Scenario.
"""

EXIT_SUCCESS = 0
EXIT_CONFIG_ERROR = 1
EXIT_ASSERTION_FAILURE = 2

class BaseInput:

    def __init__(self):

        self.modules = [] # Instances for running modules

        self.registered_modules = [] # Every module ever added, for the exit status

        self.modules_already_initialized = False # Whether these instances have been initialized yet

        self._scenario : Optional[Scenario] = None

        self.failed_modules : List[object] = [] # Modules whose "on_init" raised

        self.load_failed = False

    """
        The scenario is loaded on first access, so that loading errors are
        reported through the same path as module errors.
    """

    @property
    def scenario(self) -> Scenario:

        if self._scenario is None:

            self._scenario = self.load()

            info('Loaded scenario "%s" from %s' % (self._scenario.name, self.describe()))

        return self._scenario

    def load(self) -> Scenario:

        raise NotImplementedError

    def describe(self) -> str:

        return type(self).__name__

    """
        add_module: Add a module to self.modules.
    """

    def add_module(self, module):

        self.modules.append(module)
        self.registered_modules.append(module)

        # Modules added after the initial step are initialized at once

        if self.modules_already_initialized:

            self._init_single_module(module)

    """
        Processing loop.

        The "on_init" callback of each module is called sequentially and does
        the module's whole work; a failing module is logged and recorded,
        and does not prevent the following ones from running.

        The "on_deinit" callback and "__del__" are called once per module
        afterwards, whatever happened.
    """

    def run(self):

        try:

            try:

                self.scenario

            except MisbeliefError:

                error(format_exc())

                self.load_failed = True

                return

            self._init_modules()

        except KeyboardInterrupt:

            pass

        finally:

            self._deinit_modules()

            self.dispose()

    def _init_modules(self):

        self.modules_already_initialized = True

        for module in list(self.modules):

            self._init_single_module(module)

    def _init_single_module(self, module):

        if hasattr(module, 'on_init'):

            try:

                debug('Running module %s' % type(module).__name__)

                module.on_init()

            except Exception:

                error(format_exc())

                self.failed_modules.append(module)

    """
        remove_module: Remove a module from self.modules, calling its
        "on_deinit" and "__del__" callbacks.
    """

    def remove_module(self, module):

        if module in self.modules:

            self.modules.remove(module)

            try:

                if hasattr(module, 'on_deinit'):

                    module.on_deinit()

            except Exception:

                error(format_exc())

                if module not in self.failed_modules:
                    self.failed_modules.append(module)

            finally:

                if hasattr(module, '__del__'):

                    module.__del__()

    """
        _deinit_modules: call remove_module() for all modules.
    """

    def _deinit_modules(self):

        for module in list(self.modules):

            self.remove_module(module)

    """
        Exit status of the program once run() has returned: a module error
        (configuration, input or output) gives 1, a failed scenario
        assertion gives 2.
    """

    @property
    def exit_status(self) -> int:

        if self.load_failed or self.failed_modules:
            return EXIT_CONFIG_ERROR

        if any(getattr(module, 'assertions_failed', False) for module in self.registered_modules):

            warning('At least one scenario assertion failed')

            return EXIT_ASSERTION_FAILURE

        return EXIT_SUCCESS

    def dispose(self, disposing = True):

        """
            Release the loaded scenario
        """

        if disposing:
            self._scenario = None

    def __del__(self):

        self.dispose(disposing = False)
