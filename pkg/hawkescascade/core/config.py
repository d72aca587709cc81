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
Experiment configuration files. A configuration is an INI file whose values are Python literals (numbers, strings, lists, tuples and dicts), parsed with `ast.literal_eval`; bare words are read as strings. For example,

```
[general]
seed = 42
T = 100.0

[kernel]
c = [1.0]
alpha = [1.0]
n = [3]

[rate]
family = 'linear-positive-part'
mu = 1.0
```

Unknown sections and keys are rejected with a ConfigError naming the offending key.
"""

import ast
import configparser
import copy
import hashlib
import os
from typing import Any

import numpy as np

from .cascade import CascadeModel, CascadeState
from .errors import ConfigError
from .heights import MONTE_CARLO_SAMPLES, HeightDistribution, JumpHeightLaw
from .kernels import ErlangSumKernel
from .rates import RATE_FAMILIES, RateFunction, make_rate

__all__ = [
    'ExperimentConfig',
    'SCHEMA',
    'REQUIRED',
]

REQUIRED = object()

# section -> key -> default (REQUIRED when the key must be given once the section is used)
SCHEMA = {
    'general': {
        'seed': 0,
        'replications': 100,
        'T': REQUIRED,
        'output': 'output',
        'trajectory_step': 0.1,
        'mode': 'lemma-bound',
    },
    'kernel': {
        'c': REQUIRED,
        'alpha': REQUIRED,
        'n': REQUIRED,
    },
    'rate': dict({'family': REQUIRED}, **{name: REQUIRED for _, names in RATE_FAMILIES.values() for name in names}),
    'heights': {
        'mode': 'constant',
        'values': None,
        'laws': None,
        'law': None,
    },
    'initial': {
        'x0': 'zero',
    },
    'oracle': {
        'runs': 10,
        'grid_points': 1000,
    },
    'moments': {
        't_grid': None,
        'tolerance': 3.0,
    },
    'couple': {
        'y0': REQUIRED,
        'b': 'auto',
        't_grid': None,
        'tolerance': 3.0,
    },
    'drift': {
        'states': 1000,
        'scale': 10.0,
        'samples': MONTE_CARLO_SAMPLES,
    },
    'return_time': {
        'eta': 'auto',
        'time_cap': 1000.0,
    },
    'minorization': {
        'T': None,
        'target': 0,
        'radius': 0.1,
        'probes': 1000,
        'x_star': 'zero',
        'samples': 200,
    },
    'sweep': {
        'subcommand': 'simulate',
        'grid': REQUIRED,
    },
}

REQUIRED_SECTIONS = ['general', 'kernel', 'rate']


def _literal(text: str) -> Any:
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text.strip()


class ExperimentConfig:
    r"""
    A validated experiment configuration.

    Parameters
    ----------
    * values: dict
        * section -> key -> value, as produced by parsing an INI file

    Notes
    -----
    Only the keys that were given are stored, defaults are applied on access. Serializing with to_ini and parsing again gives an equal configuration.

    """
    def __init__(self, values: dict):
        self.values = {}
        for section, entries in values.items():
            if section not in SCHEMA:
                raise ConfigError(section, f"Unknown section. Available sections are: {', '.join(SCHEMA)}.")
            self.values[section] = {}
            for key, value in entries.items():
                if key not in SCHEMA[section]:
                    raise ConfigError(f'{section}.{key}', 'Unknown key.')
                self.values[section][key] = value

        for section in REQUIRED_SECTIONS:
            if section not in self.values:
                raise ConfigError(section, 'Missing required section.')

        self._validate()

    @classmethod
    def from_string(cls, text: str) -> 'ExperimentConfig':
        parser = configparser.ConfigParser(interpolation = None)
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as err:
            raise ConfigError('file', f'Malformed configuration: {err}') from err

        return cls({section: {key: _literal(raw) for key, raw in parser.items(section)} for section in parser.sections()})

    @classmethod
    def from_file(cls, path: str) -> 'ExperimentConfig':
        if not os.path.exists(path):
            raise ConfigError('file', f"Configuration file {path} does not exist.")
        with open(path) as fh:
            return cls.from_string(fh.read())

    def to_ini(self) -> str:
        lines = []
        for section, entries in self.values.items():
            lines.append(f'[{section}]')
            lines.extend(f'{key} = {value!r}' for key, value in entries.items())
            lines.append('')

        return '\n'.join(lines)

    def sha256(self) -> str:
        return hashlib.sha256(self.to_ini().encode('utf-8')).hexdigest()

    def __eq__(self, other) -> bool:
        return isinstance(other, ExperimentConfig) and self.values == other.values

    def has(self, section: str) -> bool:
        return section in self.values

    def get(self, section: str, key: str) -> Any:
        r"""
        The value of section.key, or its default. Raises ConfigError for required keys that are missing.
        """
        if key not in SCHEMA.get(section, {}):
            raise ConfigError(f'{section}.{key}', 'Unknown key.')
        value = self.values.get(section, {}).get(key, SCHEMA[section][key])
        if value is REQUIRED:
            raise ConfigError(f'{section}.{key}', 'Missing required key.')

        return value

    def with_overrides(self, overrides: dict) -> 'ExperimentConfig':
        r"""
        A new configuration with 'section.key' -> value overrides applied.
        """
        values = copy.deepcopy(self.values)
        for path, value in overrides.items():
            if '.' not in path:
                raise ConfigError(path, "Overrides are given as 'section.key'.")
            section, key = path.split('.', 1)
            values.setdefault(section, {})[key] = value

        return ExperimentConfig(values)

    # domain objects #
    # -------------- #

    def _validate(self) -> None:
        for key in ['seed', 'replications']:
            value = self.get('general', key)
            if not isinstance(value, int) or value < 0:
                raise ConfigError(f'general.{key}', f'Expected a non-negative integer, got {value!r}.')
        if self.get('general', 'replications') < 1:
            raise ConfigError('general.replications', 'At least one replication is needed.')
        for key in ['T', 'trajectory_step']:
            value = self.get('general', key)
            if not isinstance(value, (int, float)) or not value > 0:
                raise ConfigError(f'general.{key}', f'Expected a positive number, got {value!r}.')
        if self.get('general', 'mode') not in ['lemma-bound', 'exact']:
            raise ConfigError('general.mode', "Expected 'lemma-bound' or 'exact'.")

        # building the model validates kernel, rate, heights and initial state
        self.model()

    def kernel(self) -> ErlangSumKernel:
        try:
            return ErlangSumKernel.from_lists(self.get('kernel', 'c'), self.get('kernel', 'alpha'), self.get('kernel', 'n'))
        except (TypeError, ValueError) as err:
            raise ConfigError('kernel', str(err)) from err

    def rate(self) -> RateFunction:
        entries = dict(self.values['rate'])
        family = entries.pop('family', None)
        if family is None:
            raise ConfigError('rate.family', 'Missing required key.')
        if family not in RATE_FAMILIES:
            raise ConfigError('rate.family', f"Unknown family '{family}'. Available options are: {', '.join(RATE_FAMILIES)}.")
        for key in entries:
            if key not in RATE_FAMILIES[family][1]:
                raise ConfigError(f'rate.{key}', f"Not a parameter of family '{family}'.")
        try:
            return make_rate(family, **entries)
        except (TypeError, ValueError) as err:
            raise ConfigError('rate', str(err)) from err

    def heights(self, kernel: ErlangSumKernel = None) -> JumpHeightLaw:
        kernel = self.kernel() if kernel is None else kernel
        mode = self.get('heights', 'mode')
        try:
            if mode == 'constant':
                values = self.get('heights', 'values')
                return JumpHeightLaw.constant(kernel.c if values is None else values)
            if mode == 'iid':
                laws = self.get('heights', 'laws')
                if laws is None:
                    raise ConfigError('heights.laws', "Mode 'iid' needs one law per kernel term.")
                return JumpHeightLaw.iid([HeightDistribution.from_tuple(law) for law in laws])
            if mode == 'shared':
                law = self.get('heights', 'law')
                if law is None:
                    raise ConfigError('heights.law', "Mode 'shared' needs a law.")
                return JumpHeightLaw.shared(HeightDistribution.from_tuple(law), kernel.L)
        except ConfigError:
            raise
        except (TypeError, ValueError) as err:
            raise ConfigError('heights', str(err)) from err

        raise ConfigError('heights.mode', f"Unknown mode '{mode}'. Available options are: constant, iid, shared.")

    def state(self, section: str, key: str, kernel: ErlangSumKernel = None) -> CascadeState:
        r"""
        A cascade state from a config value that is either 'zero' or a list of kappa numbers.
        """
        kernel = self.kernel() if kernel is None else kernel
        value = self.get(section, key)
        if value == 'zero':
            return CascadeState.zeros(kernel)
        try:
            return CascadeState(kernel, np.asarray(value, dtype = float))
        except (TypeError, ValueError) as err:
            raise ConfigError(f'{section}.{key}', str(err)) from err

    def model(self) -> CascadeModel:
        kernel = self.kernel()
        heights = self.heights(kernel)
        if heights.L != kernel.L:
            raise ConfigError('heights', f'The height law has {heights.L} components but the kernel has L={kernel.L}.')

        return CascadeModel(kernel, self.rate(), heights, self.state('initial', 'x0', kernel))
