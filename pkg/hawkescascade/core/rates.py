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
Jump-rate functions f of the Hawkes process together with the metadata the stability conditions and the thinning algorithm need: a Lipschitz constant, global upper and lower bounds, and a guaranteed supremum over intervals.

Every shipped family is nondecreasing, so its exact supremum over [a, b] is its value at b.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy.special import expit

__all__ = [
    'RateFunction',
    'RATE_FAMILIES',
    'make_rate',
    'constant_rate',
    'linear_positive_part',
    'scaled_linear',
    'sigmoid',
    'capped_exponential',
    'capped_power',
]


@dataclass(frozen=True)
class RateFunction:
    r"""
    A jump-rate function $f: \mathbb{R} \to \mathbb{R}_+$ with machine-checkable metadata.

    Parameters
    ----------
    * func: Callable
        * Vectorized map y -> f(y) with non-negative values
    * lipschitz: float, optional
        * Lipschitz constant of f (growth form $f(y) \leq f(0) + L|y|$ is enough for the stability conditions)
    * upper_bound: float, optional
        * Global bound $f^* = \sup f$ for bounded rate functions
    * lower_bound: float, optional
        * Global lower bound of f. Default is 0
    * nondecreasing: bool, optional
        * If True, interval suprema are evaluated exactly at the right end point. Default is False
    * family: str, optional
        * Family name used when serializing configurations. Default is 'custom'
    * params: tuple, optional
        * Family parameters as (name, value) pairs

    Notes
    -----
    At least one of `lipschitz` or `upper_bound` must be given, otherwise neither the stability conditions nor the dominating rate are defined.

    """
    func: Callable
    lipschitz: Optional[float] = None
    upper_bound: Optional[float] = None
    lower_bound: float = 0.0
    nondecreasing: bool = False
    family: str = 'custom'
    params: tuple = field(default = ())

    def __post_init__(self):
        if self.lipschitz is None and self.upper_bound is None:
            raise ValueError('A rate function needs a Lipschitz constant or a global upper bound.')
        if self.lipschitz is not None and (self.lipschitz < 0 or not np.isfinite(self.lipschitz)):
            raise ValueError('lipschitz must be finite and non-negative.')
        if self.lower_bound < 0:
            raise ValueError('lower_bound must be non-negative.')
        if self.upper_bound is not None and self.upper_bound < self.lower_bound:
            raise ValueError('upper_bound must not be below lower_bound.')

    def __call__(self, y: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        out = self.func(y)
        return float(out) if np.ndim(out) == 0 else out

    def eval(self, y: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        return self(y)

    @property
    def is_bounded(self) -> bool:
        return self.upper_bound is not None

    @property
    def value_at_zero(self) -> float:
        return self(0.0)

    def interval_sup(self, a: float, b: float) -> float:
        r"""
        An upper bound of $\sup_{y \in [a, b]} f(y)$.

        Parameters
        ----------
        * a: float
            * Left end point
        * b: float
            * Right end point, b >= a

        Returns
        -------
        * sup: float
            * f(b) for nondecreasing f, otherwise f(mid) + lipschitz * half-width, capped by the global upper bound when it is known

        """
        if b < a:
            raise ValueError(f'Empty interval [{a}, {b}].')

        if self.nondecreasing:
            return self(b)

        candidates = []
        if self.lipschitz is not None:
            candidates.append(self(0.5*(a + b)) + self.lipschitz * 0.5*(b - a))
        if self.upper_bound is not None:
            candidates.append(self.upper_bound)

        return float(min(candidates))

    def param_dict(self) -> dict:
        return dict(self.params)


def constant_rate(rate: float) -> RateFunction:
    r"""
    The constant rate $f \equiv \lambda_0$. The Hawkes process reduces to a homogeneous Poisson process.
    """
    if rate < 0:
        raise ValueError('The constant rate must be non-negative.')
    rate = float(rate)

    return RateFunction(
        func = lambda y: np.full(np.shape(y), rate) if np.ndim(y) else rate,
        lipschitz = 0.0, upper_bound = rate, lower_bound = rate, nondecreasing = True,
        family = 'constant', params = (('rate', rate),)
    )

def linear_positive_part(mu: float) -> RateFunction:
    r"""
    $f(y) = (\mu + y) 1_{[0,\infty)}(y)$, the rate function for which the mean of $S_t$ is known in closed form.

    The function jumps by $\mu$ at 0, so the Lipschitz constant 1 is understood in the growth form $f(y) \leq f(0) + |y|$.
    """
    if mu < 0:
        raise ValueError('mu must be non-negative.')
    mu = float(mu)

    return RateFunction(
        func = lambda y: np.where(np.asarray(y) >= 0, mu + np.asarray(y, dtype = float), 0.0),
        lipschitz = 1.0, lower_bound = 0.0, nondecreasing = True,
        family = 'linear-positive-part', params = (('mu', mu),)
    )

def scaled_linear(base: float, scale: float) -> RateFunction:
    r"""
    $f(y) = \max(0, base + y/scale)$.
    """
    if scale <= 0:
        raise ValueError('scale must be positive.')
    if base < 0:
        raise ValueError('base must be non-negative.')
    base, scale = float(base), float(scale)

    return RateFunction(
        func = lambda y: np.maximum(0.0, base + np.asarray(y, dtype = float)/scale),
        lipschitz = 1/scale, lower_bound = 0.0, nondecreasing = True,
        family = 'scaled-linear', params = (('base', base), ('scale', scale))
    )

def sigmoid(base: float, sigma: float, beta: float, rho: float) -> RateFunction:
    r"""
    $f(y) = base + \sigma / (1 + e^{-\beta (y - \rho)})$, bounded between base and base + sigma.
    """
    if base < 0 or sigma < 0 or beta <= 0:
        raise ValueError('sigmoid requires base >= 0, sigma >= 0 and beta > 0.')
    base, sigma, beta, rho = float(base), float(sigma), float(beta), float(rho)

    return RateFunction(
        func = lambda y: base + sigma * expit(beta * (np.asarray(y, dtype = float) - rho)),
        lipschitz = sigma*beta/4, upper_bound = base + sigma, lower_bound = base, nondecreasing = True,
        family = 'sigmoid', params = (('base', base), ('sigma', sigma), ('beta', beta), ('rho', rho))
    )

def capped_exponential(offset: float, scale: float, cap: float) -> RateFunction:
    r"""
    $f(y) = \min(offset + e^{y/scale}, cap)$.
    """
    if scale <= 0 or offset < 0 or cap <= 0:
        raise ValueError('capped_exponential requires scale > 0, offset >= 0 and cap > 0.')
    offset, scale, cap = float(offset), float(scale), float(cap)

    # exponent clipped so that exp never overflows, the cap is reached long before
    top = np.log(cap) + 1.0

    return RateFunction(
        func = lambda y: np.minimum(offset + np.exp(np.minimum(np.asarray(y, dtype = float)/scale, top)), cap),
        lipschitz = max(cap - offset, 0.0)/scale, upper_bound = cap, lower_bound = min(offset, cap), nondecreasing = True,
        family = 'capped-exponential', params = (('offset', offset), ('scale', scale), ('cap', cap))
    )

def capped_power(offset: float, scale: float, power: float, cap: float) -> RateFunction:
    r"""
    $f(y) = \min(offset + (\max(y, 0)/scale)^{power}, cap)$.
    """
    if scale <= 0 or power <= 0 or offset < 0 or cap <= 0:
        raise ValueError('capped_power requires scale > 0, power > 0, offset >= 0 and cap > 0.')
    offset, scale, power, cap = float(offset), float(scale), float(power), float(cap)

    return RateFunction(
        func = lambda y: np.minimum(offset + (np.maximum(np.asarray(y, dtype = float), 0.0)/scale)**power, cap),
        upper_bound = cap, lower_bound = min(offset, cap), nondecreasing = True,
        family = 'capped-power', params = (('offset', offset), ('scale', scale), ('power', power), ('cap', cap))
    )


# family name -> (constructor, ordered parameter names)
RATE_FAMILIES = {
    'constant':             (constant_rate, ['rate']),
    'linear-positive-part': (linear_positive_part, ['mu']),
    'scaled-linear':        (scaled_linear, ['base', 'scale']),
    'sigmoid':              (sigmoid, ['base', 'sigma', 'beta', 'rho']),
    'capped-exponential':   (capped_exponential, ['offset', 'scale', 'cap']),
    'capped-power':         (capped_power, ['offset', 'scale', 'power', 'cap']),
}

def make_rate(family: str, **params) -> RateFunction:
    r"""
    Build a shipped rate function from its family name and keyword parameters.

    Parameters
    ----------
    * family: str
        * One of the keys of RATE_FAMILIES
    * params:
        * The family parameters, see RATE_FAMILIES for the names

    Returns
    -------
    * f: RateFunction

    """
    if family not in RATE_FAMILIES:
        raise ValueError(f"Rate family '{family}' not recognized. Available options are: {', '.join(RATE_FAMILIES)}.")

    constructor, names = RATE_FAMILIES[family]
    missing = [name for name in names if name not in params]
    unknown = [name for name in params if name not in names]
    if missing or unknown:
        raise ValueError(f"Rate family '{family}' takes parameters {names}; missing {missing}, unknown {unknown}.")

    return constructor(**{name: params[name] for name in names})
