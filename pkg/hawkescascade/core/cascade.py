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
The state space of the Markovian cascade. Between jumps the state $x \in \mathbb{R}^\kappa$ follows the linear system

$$ \dot x^{(i,k)} = -\alpha_i x^{(i,k)} + x^{(i,k+1)}, \quad k < n_i, \qquad \dot x^{(i,n_i)} = -\alpha_i x^{(i,n_i)}, $$

whose flow is known in closed form,

$$ \varphi_t^{(i,k)}(x) = e^{-\alpha_i t} \sum_{m=0}^{n_i-k} \frac{t^m}{m!} x^{(i,k+m)}. $$

A jump adds the height $c_i$ to the last coordinate $(i, n_i)$ of every block, and jumps occur at rate $f(\sum_i x^{(i,0)})$.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .heights import MONTE_CARLO_SAMPLES, MONTE_CARLO_SEED, JumpHeightLaw
from .kernels import ErlangSumKernel, LyapunovSpec
from .rates import RateFunction

__all__ = [
    'CascadeState',
    'CascadeModel',
    'GENERATOR_TEST_FUNCTIONS',
    'DOMINATION_MODES',
    'flow',
    'flow_weights',
    'flow_coords',
    'flow_first',
    'vector_field',
    'apply_jump',
    'intensity',
    'flow_sup_bound',
    'flow_sup_exact',
    'dominating_rate',
    'generator_apply',
]

GENERATOR_TEST_FUNCTIONS = ['sum-S', 'lyapunov-V']
DOMINATION_MODES = ['lemma-bound', 'exact']

# tolerances of the critical point search
ROOT_IMAG_TOL = 1e-10
SUP_BOUND_RTOL = 1e-9


class CascadeState:
    r"""
    A point $x \in \mathbb{R}^\kappa$ of the cascade state space, attached to its kernel. The coordinate array is read-only.

    Parameters
    ----------
    * kernel: ErlangSumKernel
    * coords: array_like
        * The kappa coordinates in (i, k) lexicographic order

    """
    __slots__ = ('kernel', 'coords')

    def __init__(self, kernel: ErlangSumKernel, coords):
        coords = np.array(coords, dtype = float).reshape(-1)
        if coords.size != kernel.kappa:
            raise ValueError(f'State has {coords.size} coordinates but the kernel needs kappa={kernel.kappa}.')
        if not np.all(np.isfinite(coords)):
            raise ValueError('State coordinates must be finite.')
        coords.setflags(write = False)

        self.kernel = kernel
        self.coords = coords

    @classmethod
    def zeros(cls, kernel: ErlangSumKernel) -> 'CascadeState':
        return cls(kernel, np.zeros(kernel.kappa))

    def block(self, i: int) -> np.ndarray:
        return self.coords[self.kernel.block(i)]

    def first_sum(self) -> float:
        r"""
        $\sum_i x^{(i,0)}$, the argument of the rate function.
        """
        return float(self.coords[self.kernel.first_indices].sum())

    def total(self) -> float:
        r"""
        $S(x) = \sum_{i,k} x^{(i,k)}$.
        """
        return float(self.coords.sum())

    def __eq__(self, other) -> bool:
        return isinstance(other, CascadeState) and self.kernel == other.kernel and np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash((self.kernel, self.coords.tobytes()))

    def __repr__(self) -> str:
        return f'CascadeState({self.coords.tolist()})'


@dataclass(frozen=True)
class CascadeModel:
    r"""
    Everything needed to simulate one Markovian cascade: kernel, rate function, jump-height law and initial state.
    """
    kernel: ErlangSumKernel
    rate: RateFunction
    heights: JumpHeightLaw
    x0: CascadeState

    def __post_init__(self):
        if self.heights.L != self.kernel.L:
            raise ValueError(f'The height law has {self.heights.L} components but the kernel has L={self.kernel.L}.')
        if self.x0.kernel != self.kernel:
            raise ValueError('The initial state belongs to a different kernel.')


def flow_weights(t: float, alpha: float, n: int) -> np.ndarray:
    # e^{-alpha t} t^m / m! for m = 0..n, accumulated in log space
    if t == 0.0:
        w = np.zeros(n + 1)
        w[0] = 1.0
        return w
    logs = np.concatenate([[0.0], np.cumsum(np.log(t) - np.log(np.arange(1, n + 1)))])
    return np.exp(logs - alpha*t)

def flow_coords(kernel: ErlangSumKernel, coords: np.ndarray, t: float) -> np.ndarray:
    r"""
    Closed-form flow on a raw coordinate array. See `flow`.
    """
    if t < 0:
        raise ValueError('The flow is only evaluated for t >= 0.')

    out = np.empty(kernel.kappa)
    for i in range(kernel.L):
        n = int(kernel.n[i])
        sl = kernel.block(i)
        w = flow_weights(float(t), float(kernel.alpha[i]), n)
        # component k = sum_m w_m x^{(i,k+m)}, a convolution against the reversed block
        out[sl] = np.convolve(w, coords[sl][::-1])[:n + 1][::-1]

    return out

def flow_first(kernel: ErlangSumKernel, coords: np.ndarray, t: float) -> np.ndarray:
    r"""
    The L first coordinates $\varphi_t^{(i,0)}(x)$ only.
    """
    if t < 0:
        raise ValueError('The flow is only evaluated for t >= 0.')

    return np.array([flow_weights(float(t), float(kernel.alpha[i]), int(kernel.n[i])) @ coords[kernel.block(i)] for i in range(kernel.L)])

def flow(x: CascadeState, t: float) -> CascadeState:
    r"""
    The deterministic flow $\varphi_t(x)$.

    Parameters
    ----------
    * x: CascadeState
    * t: float
        * Elapsed time, t >= 0

    Returns
    -------
    * y: CascadeState
        * $\varphi_t(x)$. Block i of the result only depends on block i of x

    Notes
    -----
    The weights $e^{-\alpha_i t} t^m / m!$ are accumulated as a running sum of logarithms, so no factorial is formed and large $n_i t$ does not overflow.

    """
    return CascadeState(x.kernel, flow_coords(x.kernel, x.coords, t))

def vector_field(x: CascadeState) -> np.ndarray:
    r"""
    $F^{(i,k)}(x) = -\alpha_i x^{(i,k)} + x^{(i,k+1)}$ for $k < n_i$ and $F^{(i,n_i)}(x) = -\alpha_i x^{(i,n_i)}$.
    """
    k = x.kernel
    F = -k.alpha_of * x.coords
    inner = np.flatnonzero(k.order_of < k.n[k.block_of])
    F[inner] += x.coords[inner + 1]

    return F

def apply_jump(x: CascadeState, heights) -> CascadeState:
    r"""
    Add heights[i] to coordinate $(i, n_i)$ for every block i.
    """
    heights = np.asarray(heights, dtype = float)
    if heights.shape != (x.kernel.L,):
        raise ValueError(f'Expected {x.kernel.L} jump heights, got shape {heights.shape}.')
    if not np.all(np.isfinite(heights)):
        raise ValueError('Jump heights must be finite.')

    coords = x.coords.copy()
    coords[x.kernel.last_indices] += heights

    return CascadeState(x.kernel, coords)

def intensity(x: CascadeState, f: RateFunction) -> float:
    r"""
    Jump rate $f(\sum_i x^{(i,0)})$ at state x.
    """
    return float(f(x.first_sum()))

def flow_sup_bound(x: CascadeState) -> float:
    r"""
    A uniform bound on the first coordinates along the flow,

    $$ \sup_{t \geq 0} |\varphi_t^{(i,0)}(x)| \leq \hat M(x) = e \|x\|_\infty \Big(1 \vee \big(\tfrac{n}{\alpha e}\big)^n\Big), $$

    with n the largest delay order, $\alpha$ the smallest decay rate and $(n/(\alpha e))^n := 1$ for n = 0.
    """
    k = x.kernel
    norm = float(np.max(np.abs(x.coords)))
    n = k.n_max
    factor = 1.0 if n == 0 else max(1.0, (n/(k.alpha_min*np.e))**n)

    return np.e * norm * factor

def flow_sup_exact(x: CascadeState, full_output: bool = False) -> Union[float, tuple[float, bool]]:
    r"""
    $\max_i \sup_{t \geq 0} |\varphi_t^{(i,0)}(x)|$ by enumeration of critical points.

    With $P_i(t) = \sum_m x^{(i,m)} t^m/m!$, the first coordinate is $e^{-\alpha_i t}P_i(t)$ and its critical points are the real positive roots of $P_i' - \alpha_i P_i$. Together with t = 0 (the limit at infinity is 0) they give the supremum.

    Parameters
    ----------
    * x: CascadeState
    * full_output: bool, optional
        * If True, also return whether the root finding succeeded. Default is False

    Returns
    -------
    * sup: float
        * Never larger than flow_sup_bound(x), which is returned as a fallback when root finding fails. A supremum above the bound beyond rounding raises RuntimeError
    * exact: bool
        * Only if full_output is True

    """
    k = x.kernel
    bound = flow_sup_bound(x)
    best = 0.0

    try:
        for i in range(k.L):
            n, alpha = int(k.n[i]), float(k.alpha[i])
            xb = x.block(i)
            best = max(best, abs(xb[0]))
            if n == 0:
                continue

            inv_fact = np.cumprod(np.concatenate([[1.0], 1/np.arange(1, n + 1)]))
            shifted = np.concatenate([xb[1:], [0.0]])
            Q = npoly.polytrim((shifted - alpha*xb) * inv_fact)
            if Q.size <= 1:
                continue

            roots = npoly.polyroots(Q)
            if not np.all(np.isfinite(roots)):
                raise np.linalg.LinAlgError('non-finite critical point')

            real = roots[np.abs(roots.imag) <= ROOT_IMAG_TOL * np.maximum(1.0, np.abs(roots))].real
            for t in real[real > 0]:
                best = max(best, abs(flow_weights(float(t), alpha, n) @ xb))

    except np.linalg.LinAlgError:
        return (bound, False) if full_output else bound

    if best > bound * (1 + SUP_BOUND_RTOL):
        raise RuntimeError(f'Flow supremum {best!r} exceeds the analytic bound {bound!r} for state {x.coords.tolist()!r}.')
    best = min(best, bound)

    return (best, True) if full_output else best

def dominating_rate(x: CascadeState, f: RateFunction, mode: str = 'lemma-bound') -> float:
    r"""
    A rate $f^*(x)$ dominating the intensity along the whole flow started at x, $f^*(x) \geq f(\sum_i \varphi_t^{(i,0)}(x))$ for all $t \geq 0$.

    Parameters
    ----------
    * x: CascadeState
    * f: RateFunction
    * mode: str, optional
        * 'lemma-bound' uses flow_sup_bound, 'exact' uses flow_sup_exact. Default is 'lemma-bound'

    Returns
    -------
    * f_star: float
        * With $M$ the chosen flow bound: interval_sup(0, LM) on the non-negative orthant, interval_sup(-LM, 0) on the non-positive orthant and interval_sup(-LM, LM) elsewhere

    """
    if mode not in DOMINATION_MODES:
        raise ValueError(f"Domination mode '{mode}' not recognized. Available options are: {', '.join(DOMINATION_MODES)}.")

    M = flow_sup_bound(x) if mode == 'lemma-bound' else flow_sup_exact(x)
    LM = x.kernel.L * M

    # the flow preserves both closed orthants
    if np.all(x.coords >= 0):
        return float(f.interval_sup(0.0, LM))
    if np.all(x.coords <= 0):
        return float(f.interval_sup(-LM, 0.0))

    return float(f.interval_sup(-LM, LM))

def generator_apply(g: str, x: CascadeState, f: RateFunction, heights: JumpHeightLaw, spec: Optional[LyapunovSpec] = None, samples: int = MONTE_CARLO_SAMPLES, seed: int = MONTE_CARLO_SEED, full_output: bool = False) -> Union[float, tuple[float, float]]:
    r"""
    Apply the generator

    $$ \mathcal{L}g(x) = \langle F(x), \nabla g(x) \rangle + f\Big(\sum_i x^{(i,0)}\Big) E_G\Big[g\big(x + \sum_i c_i e_{(i,n_i)}\big) - g(x)\Big] $$

    to one of the named test functions.

    Parameters
    ----------
    * g: str
        * 'sum-S' for $S(x) = \sum_{i,k} x^{(i,k)}$, or 'lyapunov-V' for the Lyapunov function of `spec`
    * x: CascadeState
    * f: RateFunction
    * heights: JumpHeightLaw
    * spec: LyapunovSpec, optional
        * Required for 'lyapunov-V'
    * samples, seed: int, optional
        * Monte Carlo settings for the jump expectation of 'lyapunov-V' under random heights
    * full_output: bool, optional
        * If True, also return the Monte Carlo standard error of Lg. Default is False

    Returns
    -------
    * Lg: float
    * stderr: float
        * Only if full_output is True

    Notes
    -----
    The gradient of V uses sg(0) = 0. The jump expectation of S is linear in the heights and always exact.

    """
    if g not in GENERATOR_TEST_FUNCTIONS:
        raise ValueError(f"Test function '{g}' not recognized. Available options are: {', '.join(GENERATOR_TEST_FUNCTIONS)}.")

    k = x.kernel
    F = vector_field(x)
    rate = intensity(x, f)

    if g == 'sum-S':
        mean_jump = sum(law.mean() for law in heights.component_laws())
        value = float(F.sum() + rate * mean_jump)
        return (value, 0.0) if full_output else value

    if spec is None:
        raise ValueError("The 'lyapunov-V' test function needs a LyapunovSpec.")

    w = spec.weights(k)
    drift = float(np.sum(w * np.sign(x.coords) * F))

    last = x.coords[k.last_indices]
    w_last = w[k.last_indices]
    jump, stderr = heights.expectation(lambda c: (np.abs(last + c) - np.abs(last)) @ w_last, samples = samples, seed = seed)

    value = drift + rate * jump
    return (value, rate * stderr) if full_output else value
