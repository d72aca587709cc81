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
Exception types raised by hawkescascade. Plain `ValueError` and `RuntimeError` are used for ordinary argument checks, the classes below carry extra diagnostic information for the cases the command line interface has to tell apart.
"""

__all__ = [
    'ConfigError',
    'DominationError',
    'InfeasibleError',
    'NoContractionError',
    'QuadratureError',
]


class ConfigError(ValueError):
    r"""
    Raised when an experiment configuration cannot be parsed into valid domain objects.

    Parameters
    ----------
    * key_path: str
        * The offending key as 'section.key' (or 'section' for section-level problems)
    * message: str
        * Human readable description of the problem

    """
    def __init__(self, key_path: str, message: str):
        self.key_path = key_path
        super().__init__(f"[{key_path}] {message}")


class DominationError(RuntimeError):
    r"""
    Raised by the thinning loops when the acceptance ratio exceeds one. This always indicates a bug in the dominating rate computation, never a property of the model.

    Parameters
    ----------
    * clock: float
        * Simulation clock at the offending proposal
    * state: np.ndarray
        * Cascade state (coordinates) at the start of the proposal
    * ratio: float
        * The acceptance ratio that was found

    """
    def __init__(self, clock: float, state, ratio: float):
        self.clock = clock
        self.state = state
        self.ratio = ratio
        super().__init__(f"Domination violated at clock {clock!r}: ratio {ratio!r} > 1 for state {list(state)!r}.")


class InfeasibleError(ValueError):
    r"""
    Raised when the drift condition cannot be met, i.e. the rate function is unbounded and its Lipschitz constant violates the sub-criticality condition on the expected weighted heights.
    """


class NoContractionError(ValueError):
    r"""
    Raised when the Wasserstein contraction rate d is not positive, so that no contraction certificate is available.
    """


class QuadratureError(RuntimeError):
    r"""
    Raised when adaptive quadrature does not reach the requested tolerance.

    Parameters
    ----------
    * estimate: float
        * The partial estimate returned by the quadrature routine
    * error: float
        * The reported absolute error estimate

    """
    def __init__(self, message: str, estimate: float, error: float):
        self.estimate = estimate
        self.error = error
        super().__init__(f"{message} (partial estimate {estimate!r}, error estimate {error!r})")
