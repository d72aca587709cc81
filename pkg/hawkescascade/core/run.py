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

import os
from pathlib import Path
from typing import Optional

from .. import __version__
from ..simulation.misc import emit_report
from .analysis import do_analysis, SUBCOMMANDS
from .config import ExperimentConfig
from .errors import ConfigError

__all__ = [
    'BUNDLED_CONFIGS',
    'resolve_config',
    'run',
]

BUNDLED_CONFIGS = os.path.join(Path(__file__).parents[1], 'configs')


def resolve_config(config_file: str, working_dir: str) -> str:
    r"""
    Locate a configuration file: first relative to working_dir, then among the bundled configurations (with or without the .ini extension).
    """
    candidates = [os.path.join(working_dir, config_file)]
    name = config_file if config_file.endswith('.ini') else f'{config_file}.ini'
    candidates.append(os.path.join(BUNDLED_CONFIGS, name))

    for path in candidates:
        if os.path.isfile(path):
            return path

    raise ConfigError('file', f"Configuration file {config_file} does not exist. Check filename spelling and ensure it is located in {working_dir} or is one of the bundled configurations in {BUNDLED_CONFIGS}.")

def run(subcommand: str, config_file: str, working_dir: str, seed: Optional[int] = None, reps: Optional[int] = None, out: Optional[str] = None, verbose: bool = True) -> int:
    r"""
    Main run function that parses the configuration file, applies command line overrides, runs the requested subcommand and writes its outputs.

    Parameters
    ----------
    * subcommand: str
        * One of hawkescascade.core.analysis.SUBCOMMANDS
    * config_file: str
        * Path of the configuration file relative to working_dir, or the name of a bundled configuration
    * working_dir: str
        * The absolute path (working directory) where the entry point was invoked from
    * seed: int, optional
        * Overrides general.seed
    * reps: int, optional
        * Overrides general.replications
    * out: str, optional
        * Overrides general.output, the output directory (relative to working_dir)
    * verbose: bool, optional
        * True (default) to print progress

    Returns
    -------
    * status: int
        * 0 if every assertion of the subcommand passed, 1 otherwise

    Notes
    -----
    Configuration problems raise ConfigError, which the entry point maps to exit status 2.

    """
    if subcommand not in SUBCOMMANDS:
        raise ConfigError('subcommand', f"The subcommand '{subcommand}' is not recognized by hawkescascade. Available options are: {', '.join(SUBCOMMANDS)}.")

    config = ExperimentConfig.from_file(resolve_config(config_file, working_dir))

    overrides = {}
    if seed is not None:
        overrides['general.seed'] = int(seed)
    if reps is not None:
        overrides['general.replications'] = int(reps)
    if out is not None:
        overrides['general.output'] = out
    if overrides:
        config = config.with_overrides(overrides)

    output_dir = os.path.join(working_dir, config.get('general', 'output'))

    result = do_analysis(config, subcommand, output_dir, verbose)
    emit_report(result, output_dir, config.to_ini(), config.get('general', 'seed'), __version__, verbose)

    if verbose:
        print(f"{subcommand}: {'passed' if result.passed else 'FAILED'}")

    return 0 if result.passed else 1
