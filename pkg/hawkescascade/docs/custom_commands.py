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

# Custom Commands

The hawkescascade library makes use of [entry points](https://packaging.python.org/en/latest/specifications/entry-points/).
These are custom command-line arguments that trigger specific library actions.

* `hawkescascade SUBCOMMAND --config CONFIG [--seed N] [--out DIR] [--reps N] [--quiet]` - runs one analysis described by a text-based configuration file. `CONFIG` is either a path relative to the current directory or the name of a bundled configuration (`fig1` to `fig6`, `poisson`, `contraction`, `drift`, `return_time`, `minorization`). The subcommands are `simulate`, `oracle-compare`, `validate-moments`, `couple`, `drift-check`, `return-time`, `minorization-check` and `sweep`. The exit status is 0 when every check of the subcommand passed, 1 when a check failed and 2 for configuration errors.
* `hawkescascade-test` - triggers all library unit tests and will report any failures. It is encouraged to use this command if (1) you are modifying the library source code or (2) after initial library installation.

"""
