#!/usr/bin/python3
#-*- encoding: Utf-8 -*-
from typing import Optional, Tuple
from os import environ
from math import sqrt

from numpy.random import Generator, Philox, SeedSequence
from scipy.stats import norm
import numpy as np

from .env import NoiseBlock
from .errors import ConfigError

"""
    Counter-based random streams. Path i of a run seeded with S owns the
    streams spawned from SeedSequence(S, spawn_key = (i,)), so its draws
    depend neither on the number of paths nor on how paths are scheduled
    over threads.

    Each path owns four child streams: mixture selectors, outcome uniforms,
    outcome normals, and nature (the parameter drawn when outcomes come
    from a model instead of the true process). Every stream is consumed as
    one block per path, so the first T periods of a path are identical for
    every horizon >= T.
"""

SEED_ENVIRONMENT_VARIABLE = 'MISBELIEF_SEED'

class PathStreams:

    def __init__(self, master_seed : int, path_index : int):

        self.path_index = path_index

        root = SeedSequence(master_seed, spawn_key = (path_index,))

        self.selector, self.uniforms, self.normals, self.nature = [Generator(Philox(child)) for child in root.spawn(4)]

    @classmethod
    def from_generator(cls, rng : Generator) -> 'PathStreams':

        """
            Streams drawn from a caller-owned generator, for single paths.
        """

        streams = cls.__new__(cls)

        streams.path_index = 0
        streams.selector = streams.uniforms = streams.normals = streams.nature = rng

        return streams

    def noise(self, horizon : int, dimension : int) -> NoiseBlock:

        """
            Noise for periods 0 to horizon - 1, one row per period.
        """

        return NoiseBlock(self.selector.random(horizon), self.uniforms.random((horizon, dimension)),
            self.normals.standard_normal((horizon, dimension)))

def stack_noise(blocks) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:

    """
        Stack per-path noise blocks into arrays of shape (paths, periods)
        and (paths, periods, dimension).
    """

    return (np.stack([block.selector for block in blocks]), np.stack([block.uniforms for block in blocks]),
        np.stack([block.normals for block in blocks]))

def wilson_interval(successes : int, trials : int, confidence : float = 0.95) -> Tuple[float, float]:

    if trials <= 0:
        return (0.0, 1.0)

    z = norm.ppf(0.5 + confidence / 2)

    proportion = successes / trials
    denominator = 1 + z * z / trials

    center = (proportion + z * z / (2 * trials)) / denominator
    half_width = z * sqrt(proportion * (1 - proportion) / trials + z * z / (4 * trials * trials)) / denominator

    return (max(0.0, center - half_width), min(1.0, center + half_width))

def resolve_seed(cli_seed : Optional[int] = None, scenario_seed : Optional[int] = None) -> int:

    if cli_seed is not None:
        return int(cli_seed)

    if environ.get(SEED_ENVIRONMENT_VARIABLE, '').strip():

        try:
            return int(environ[SEED_ENVIRONMENT_VARIABLE])
        except ValueError:
            raise ConfigError('%s must be an integer, got "%s"' % (SEED_ENVIRONMENT_VARIABLE, environ[SEED_ENVIRONMENT_VARIABLE]))

    if scenario_seed is not None:
        return int(scenario_seed)

    return 0
