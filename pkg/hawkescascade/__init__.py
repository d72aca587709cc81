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

# Website front page goes here

r"""

.. include:: ../WEBHOME.md

"""

__version__ = '1.0.1'
