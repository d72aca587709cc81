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
This module holds the random stream discipline shared by every simulation in hawkescascade.

Streams are counter-based `numpy.random.Philox` generators keyed by the triple (master seed, replication index, stream id) through `numpy.random.SeedSequence`. Two runs with equal keys see exactly the same draws, and replications never share state, so results do not depend on the order in which replications are executed.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    'STREAM_PROPOSALS',
    'STREAM_HEIGHTS',
    'STREAM_MONTE_CARLO',
    'STREAM_STATES',
    'SeedRecord',
    'make_stream',
    'exponential',
]

# stream ids
STREAM_PROPOSALS    = 0
STREAM_HEIGHTS      = 1
STREAM_MONTE_CARLO  = 2
STREAM_STATES       = 3


@dataclass(frozen=True)
class SeedRecord:
    r"""
    Identifies the random streams that produced a simulation output.

    Parameters
    ----------
    * master_seed: int
        * The user-facing seed
    * replication: int
        * Replication index (0 for single runs)
    * streams: tuple[int, ...]
        * The stream ids that were consumed

    """
    master_seed: int
    replication: int = 0
    streams: tuple = (STREAM_PROPOSALS, STREAM_HEIGHTS)


def make_stream(master_seed: int, replication: int = 0, stream: int = STREAM_PROPOSALS) -> np.random.Generator:
    r"""
    Build the generator for one (master seed, replication, stream) key.

    Parameters
    ----------
    * master_seed: int
        * Non-negative master seed
    * replication: int, optional
        * Replication index. Default is 0
    * stream: int, optional
        * Stream id, see the STREAM_* constants. Default is STREAM_PROPOSALS

    Returns
    -------
    * rng: np.random.Generator
        * A Philox-backed generator positioned at the start of the stream

    """
    if int(master_seed) < 0:
        raise ValueError('master_seed must be a non-negative integer.')
    if int(replication) < 0 or int(stream) < 0:
        raise ValueError('replication and stream must be non-negative integers.')

    seq = np.random.SeedSequence(entropy = int(master_seed), spawn_key = (int(replication), int(stream)))

    return np.random.Generator(np.random.Philox(seq))

def exponential(rng: np.random.Generator, rate: float) -> float:
    r"""
    Exponential draw with parameter `rate` by inversion of the CDF, consuming exactly one uniform. A zero rate gives an infinite waiting time.
    """
    u = rng.random()
    if rate <= 0.0:
        return np.inf

    return -np.log1p(-u) / rate
