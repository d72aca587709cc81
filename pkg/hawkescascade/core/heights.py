########################################################################################################################
# Copyright 2024 the authors (see AUTHORS file for full list).                                                         #
#                                                                                                                      #
# This file is part of hawkescascade.                                                                                  #
#                                                                                                                      #
# Hawkescascade is free software: you can redistribute it and/or modify it under the terms of the GNU Lesser General   #
# Public License as published by the Free Software Foundation, either version 2.1 of the License, or (at your option)  #
# any later version.                                                                                                   #
#                                                                                                                      #
# Hawkescascade is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without even the implied  #
# warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU Lesser General Public License for more  #
# details.                                                                                                             #
#                                                                                                                      #
# You should have received a copy of the GNU Lesser General Public License along with hawkescascade. If not, see       #
# <https://www.gnu.org/licenses/>.                                                                                     #
########################################################################################################################

r"""
This module holds the jump-height laws G of the Markovian cascade. Heights are either the constant kernel weights, independent draws per component, or one draw shared by all components.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .streams import STREAM_MONTE_CARLO, make_stream

__all__ = [
    'HeightDistribution',
    'JumpHeightLaw',
    'MONTE_CARLO_SEED',
    'MONTE_CARLO_SAMPLES',
]

HEIGHT_MODES = ['constant', 'iid', 'shared']
DISTRIBUTION_KINDS = ['point', 'normal', 'uniform']

# fixed substream used for every Monte Carlo expectation over G
MONTE_CARLO_SEED = 20170601
MONTE_CARLO_SAMPLES = 200_000


@dataclass(frozen=True)
class HeightDistribution:
    r"""
    A one-dimensional law for jump heights.

    Parameters
    ----------
    * kind: str
        * One of 'point', 'normal' or 'uniform'
    * params: tuple
        * ('point', v): the point mass at v
        * ('normal', mean, variance): the normal law N(mean, variance)
        * ('uniform', a, b): the uniform law on [a, b]

    """
    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in DISTRIBUTION_KINDS:
            raise ValueError(f"Height distribution '{self.kind}' not recognized. Available options are: {', '.join(DISTRIBUTION_KINDS)}.")
        nparams = {'point': 1, 'normal': 2, 'uniform': 2}[self.kind]
        if len(self.params) != nparams:
            raise ValueError(f"Height distribution '{self.kind}' takes {nparams} parameter(s), got {len(self.params)}.")
        if not all(np.isfinite(p) for p in self.params):
            raise ValueError('Height distribution parameters must be finite.')
        if self.kind == 'normal' and self.params[1] < 0:
            raise ValueError('Normal variance must be non-negative.')
        if self.kind == 'uniform' and self.params[0] > self.params[1]:
            raise ValueError('Uniform law requires a <= b.')

    @classmethod
    def from_tuple(cls, spec: tuple) -> 'HeightDistribution':
        r"""
        Build a distribution from its config tuple, e.g. ('normal', 0, 100).
        """
        if not isinstance(spec, (tuple, list)) or len(spec) < 1:
            raise ValueError(f"Height law must be a tuple such as ('normal', 0, 100), got {spec!r}.")
        return cls(kind = str(spec[0]), params = tuple(float(p) for p in spec[1:]))

    def to_tuple(self) -> tuple:
        return (self.kind,) + tuple(self.params)

    def sample(self, rng: np.random.Generator, size: Optional[int] = None):
        if self.kind == 'point':
            return self.params[0] if size is None else np.full(size, self.params[0])
        elif self.kind == 'normal':
            return rng.normal(self.params[0], np.sqrt(self.params[1]), size = size)
        else:
            return rng.uniform(self.params[0], self.params[1], size = size)

    def mean(self) -> float:
        if self.kind == 'uniform':
            return 0.5 * (self.params[0] + self.params[1])
        return self.params[0]

    def support_interval(self) -> tuple[float, float]:
        r"""
        Exhibit an interval (a, b) with 0 not in (a, b) and positive mass under the law.

        Returns
        -------
        * (a, b): tuple[float, float]
            * The interval. Its midpoint is a natural non-zero probe height

        Notes
        -----
        Raises ValueError when the law is the point mass at zero, which carries no jump noise.

        """
        if self.kind == 'point':
            v = self.params[0]
            if v == 0:
                raise ValueError('The point mass at 0 has no support away from 0.')
            return (min(v/2, 3*v/2), max(v/2, 3*v/2))

        elif self.kind == 'normal':
            mean, sd = self.params[0], np.sqrt(self.params[1])
            if sd == 0:
                return HeightDistribution('point', (mean,)).support_interval()
            if mean >= 0:
                return (0.0, mean + sd)
            return (mean - sd, 0.0)

        a, b = self.params
        if a == b:
            return HeightDistribution('point', (a,)).support_interval()
        if a >= 0 or b <= 0:
            return (a, b)
        return (0.0, b)


@dataclass(frozen=True)
class JumpHeightLaw:
    r"""
    The law G of the jump heights (c_1, ..., c_L) added to the coordinates (i, n_i) at every jump.

    Parameters
    ----------
    * mode: str
        * 'constant' (deterministic heights), 'iid' (independent G_i per component) or 'shared' (one draw from G applied to every component)
    * L: int
        * Number of kernel components
    * values: tuple[float, ...], optional
        * The constant heights, for mode 'constant'
    * laws: tuple[HeightDistribution, ...], optional
        * L laws for mode 'iid', a single law for mode 'shared'

    Notes
    -----
    Draw order is part of the replay contract: 'iid' consumes one draw per component in component order, 'shared' consumes one draw, 'constant' consumes nothing.

    """
    mode: str
    L: int
    values: Optional[tuple] = None
    laws: tuple = ()

    def __post_init__(self):
        if self.mode not in HEIGHT_MODES:
            raise ValueError(f"Height mode '{self.mode}' not recognized. Available options are: {', '.join(HEIGHT_MODES)}.")
        if self.L < 1:
            raise ValueError('L must be at least 1.')
        if self.mode == 'constant':
            if self.values is None or len(self.values) != self.L:
                raise ValueError(f'Constant heights require exactly L={self.L} values.')
            if not all(np.isfinite(v) for v in self.values):
                raise ValueError('Constant heights must be finite.')
        elif self.mode == 'iid' and len(self.laws) != self.L:
            raise ValueError(f'iid heights require exactly L={self.L} laws.')
        elif self.mode == 'shared' and len(self.laws) != 1:
            raise ValueError('shared heights require exactly one law.')

    @classmethod
    def constant(cls, values) -> 'JumpHeightLaw':
        values = tuple(float(v) for v in values)
        return cls(mode = 'constant', L = len(values), values = values)

    @classmethod
    def iid(cls, laws) -> 'JumpHeightLaw':
        laws = tuple(laws)
        return cls(mode = 'iid', L = len(laws), laws = laws)

    @classmethod
    def shared(cls, law: HeightDistribution, L: int) -> 'JumpHeightLaw':
        return cls(mode = 'shared', L = L, laws = (law,))

    @property
    def is_constant(self) -> bool:
        return self.mode == 'constant'

    def component_laws(self) -> tuple:
        r"""
        The marginal law of every component, as HeightDistribution objects.
        """
        if self.mode == 'constant':
            return tuple(HeightDistribution('point', (v,)) for v in self.values)
        if self.mode == 'shared':
            return self.laws * self.L
        return self.laws

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        r"""
        Draw one height vector of length L.
        """
        if self.mode == 'constant':
            return np.array(self.values, dtype = float)
        if self.mode == 'shared':
            return np.full(self.L, float(self.laws[0].sample(rng)))
        return np.array([float(law.sample(rng)) for law in self.laws])

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        r"""
        Draw `size` height vectors at once, returned as an array of shape (size, L).
        """
        if self.mode == 'constant':
            return np.tile(np.array(self.values, dtype = float), (size, 1))
        if self.mode == 'shared':
            return np.repeat(self.laws[0].sample(rng, size = size)[:, None], self.L, axis = 1)
        return np.column_stack([law.sample(rng, size = size) for law in self.laws])

    def expectation(self, fn: Callable[[np.ndarray], np.ndarray], samples: int = MONTE_CARLO_SAMPLES, seed: int = MONTE_CARLO_SEED) -> tuple[float, float]:
        r"""
        Expectation of fn(c) under G.

        Parameters
        ----------
        * fn: Callable
            * Vectorized function mapping an array of height vectors (shape (m, L)) to m real values
        * samples: int, optional
            * Monte Carlo sample size for random heights. Default is MONTE_CARLO_SAMPLES
        * seed: int, optional
            * Master seed of the dedicated Monte Carlo substream. Default is MONTE_CARLO_SEED

        Returns
        -------
        * (mean, stderr): tuple[float, float]
            * The expectation and its standard error (0 for constant heights, which are evaluated exactly)

        """
        if self.mode == 'constant':
            return float(fn(np.array(self.values, dtype = float)[None, :])[0]), 0.0

        rng = make_stream(seed, 0, STREAM_MONTE_CARLO)
        values = np.asarray(fn(self.sample_many(rng, samples)), dtype = float)

        return float(values.mean()), float(values.std(ddof = 1) / np.sqrt(samples))

    def to_config(self) -> dict:
        if self.mode == 'constant':
            return {'mode': 'constant', 'values': list(self.values)}
        if self.mode == 'shared':
            return {'mode': 'shared', 'law': self.laws[0].to_tuple()}
        return {'mode': 'iid', 'laws': [law.to_tuple() for law in self.laws]}
