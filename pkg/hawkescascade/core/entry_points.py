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

import argparse
import os
from pathlib import Path
import subprocess
import sys
from typing import Optional

from . import run
from .analysis import SUBCOMMANDS
from .errors import ConfigError, DominationError, InfeasibleError, NoContractionError, QuadratureError

__all__ = [
    'build_parser',
    'main',
    'run_hawkescascade',
    'run_tests',
]

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    r"""
    Command line parser: `hawkescascade <subcommand> --config <path> [--seed N] [--out DIR] [--reps N]`.
    """
    parser = argparse.ArgumentParser(prog = 'hawkescascade', description = 'Simulation and stability analysis of Hawkes processes with Erlang memory kernels.')
    subparsers = parser.add_subparsers(dest = 'subcommand', required = True, metavar = 'SUBCOMMAND')

    for name in SUBCOMMANDS:
        sub = subparsers.add_parser(name)
        sub.add_argument('--config', required = True, help = 'configuration file, or the name of a bundled configuration such as fig2')
        sub.add_argument('--seed', type = int, default = None, help = 'override general.seed')
        sub.add_argument('--out', default = None, help = 'override general.output')
        sub.add_argument('--reps', type = int, default = None, help = 'override general.replications')
        sub.add_argument('--quiet', action = 'store_true', help = 'do not print progress')

    return parser

def main(argv: Optional[list[str]] = None) -> int:
    r"""
    Parse arguments, run the subcommand and map the outcome to an exit status: 0 on success, 1 on a failed assertion, 2 on a configuration error.
    """
    args = build_parser().parse_args(argv)

    try:
        return run.run(args.subcommand, args.config, os.getcwd(), seed = args.seed, reps = args.reps, out = args.out, verbose = not args.quiet)
    except ConfigError as err:
        print(f'Configuration error: {err}', file = sys.stderr)
        return EXIT_CONFIG
    except DominationError as err:
        print(f'Thinning failure: {err}', file = sys.stderr)
        return EXIT_ASSERTION
    except (InfeasibleError, NoContractionError, QuadratureError) as err:
        print(f'No certificate: {err}', file = sys.stderr)
        return EXIT_ASSERTION

def run_hawkescascade():
    r"""
    Main function that runs hawkescascade. This is only invoked via the entry point "hawkescascade SUBCOMMAND --config CONFIG".
    """
    sys.exit(main())

def run_tests():
    r"""
    Main function that runs all the unit tests via unittest from Python STL. This is only invoked via the entry point "hawkescascade-test" from any directory on your system.
    """
    print("Initiating hawkescascade unit tests. The statistical suites take a few minutes.")

    # if the user knows what they're doing, this would use same interpreter as that to install the package
    pyinterp = sys.executable
    tests_dir = os.path.join(Path(__file__).parents[1], 'tests')

    if pyinterp:
        subprocess.call([pyinterp, '-B', '-m', 'unittest', 'discover', '-v', '-s', tests_dir, '-t', str(Path(__file__).parents[2])])

    else:
        import platform
        ostype = str(platform.platform())

        print('Do you have a regular Python interpreter installed on your machine?')
        print('Attempting manual unit testing...')

        if 'win' in ostype.lower():
            subprocess.call(['py', '-3', '-B', '-m', 'unittest', 'discover', '-v', '-s', tests_dir], cwd = tests_dir)
        else:
            subprocess.call(['python3', '-B', '-m', 'unittest', 'discover', '-v', '-s', tests_dir], cwd = tests_dir)
