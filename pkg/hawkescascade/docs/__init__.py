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

This submodule contains documentation for several examples (see below), installation instructions, custom commands, library interfacing, and a CHANGELOG for detailed commit history.

Examples for the **hawkescascade.simulation** submodule:
* Example 1 - simulating a non-linear Hawkes process through its Markovian cascade
* Example 2 - validating the simulator against the closed-form mean and the history-based oracle

Examples for the **hawkescascade.stability** submodule:
* Example 3 - coupling, drift, return times and minorization probes

"""

from .example_1 import *
from .example_2 import *
from .example_3 import *
from .installation_guide import *
from .library_interface import *
from .custom_commands import *
