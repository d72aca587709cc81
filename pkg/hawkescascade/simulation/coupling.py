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
The Wasserstein coupling of two Markovian cascades started at x and y. Both components share the proposal stream; at a proposal the uniform $V = U B$, with $B = f^*(x) \vee f^*(y)$, decides between a joint jump with common heights (when $V \leq f_x \wedge f_y$), a jump of one component alone, or no jump.

Contraction is measured with the weighted distance

$$ H(x, y) = \sum_{i,k} \frac{b(k+1)}{\alpha_i^k} |x^{(i,k)} - y^{(i,k)}|, $$

which joint jumps leave unchanged.
"""

from dataclasses import dataclass

import numpy as np

from ..core.cascade import CascadeModel, CascadeState, dominating_rate, flow_coords
from ..core.errors import DominationError, InfeasibleError, NoContractionError
from ..core.heights import MONTE_CARLO_SAMPLES, MONTE_CARLO_SEED, JumpHeightLaw
from ..core.kernels import ErlangSumKernel, expected_weighted_heights
from ..core.rates import RateFunction
from ..core.streams import STREAM_HEIGHTS, STREAM_PROPOSALS, SeedRecord, exponential, make_stream
from .simulator import DOMINATION_TOL, EventLog, reconstruct_trajectory

__all__ = [
    'CoupledState',
    'CoupledRun',
    'ContractionConstants',
    'h_weights',
    'h_distance',
    'contraction_constants',
    'simulate_coupled',
    'coupled_path',
    'estimate_contraction',
]


@dataclass(frozen=True)
class CoupledState:
    r"""
    A pair of cascade states on the same kernel.
    """
    x: CascadeState
    y: CascadeState

    def __post_init__(self):
        if self.x.kernel != self.y.kernel:
            raise ValueError('Both components of a coupled state must share one kernel.')


@dataclass(frozen=True)
class ContractionConstants:
    r"""
    Constants of the contraction bound $W_1(\delta_x P_t, \delta_y P_t) \leq \kappa e^{-dt} \|x - y\|_1$.

    Parameters
    ----------
    * kappa_contr: float
        * $\frac{A^n \vee 1}{1 \wedge \alpha^{n+1}} \frac{b(n+1)}{b(1)}$
    * d: float
        * Contraction rate, positive
    * b: tuple[float, ...]
        * The weight function used

    """
    kappa_contr: float
    d: float
    b: tuple


@dataclass(eq = False)
class CoupledRun:
    r"""
    The two event logs of a coupled simulation and the number of joint and solo jumps.
    """
    x_log: EventLog
    y_log: EventLog
    joint: int = 0
    solo_x: int = 0
    solo_y: int = 0


def h_weights(k: ErlangSumKernel, b) -> np.ndarray:
    b = np.asarray(b, dtype = float)
    if b.size < k.n_max + 2:
        raise ValueError(f'b must be defined on {{0..{k.n_max+1}}}.')
    if np.any(np.diff(b) <= 0):
        raise ValueError('b must be strictly increasing.')

    return b[k.order_of + 1] / k.alpha_of**k.order_of

def h_distance(s: CoupledState, b) -> float:
    r"""
    The weighted $\ell^1$ distance H between the two components.

    Parameters
    ----------
    * s: CoupledState
    * b: sequence of float
        * Strictly increasing values b(0), ..., b(n+1)

    Returns
    -------
    * H: float

    """
    return float(h_weights(s.x.kernel, b) @ np.abs(s.x.coords - s.y.coords))

def contraction_constants(k: ErlangSumKernel, f: RateFunction, heights: JumpHeightLaw, b, samples: int = MONTE_CARLO_SAMPLES, seed: int = MONTE_CARLO_SEED) -> ContractionConstants:
    r"""
    The constants $\kappa$ and d of the contraction theorem for Lipschitz f,

    $$ d = \Big(\alpha - \|f\|_{Lip}\frac{b(n+1)}{b(1)} E_G\Big[\sum_i \alpha_i^{-n_i}|c_i|\Big]\Big) \wedge \frac{\alpha b_*}{b(n+1)}. $$

    Parameters
    ----------
    * k: ErlangSumKernel
    * f: RateFunction
        * Must carry a Lipschitz constant
    * heights: JumpHeightLaw
    * b: sequence of float
        * Strictly increasing values b(0), ..., b(n+1)

    Returns
    -------
    * constants: ContractionConstants

    Notes
    -----
    Raises InfeasibleError when the weighted-height condition fails and NoContractionError when d <= 0. Both constants only depend on ratios of b.

    """
    if f.lipschitz is None:
        raise ValueError('The contraction constants need a Lipschitz rate function.')

    n, alpha = k.n_max, k.alpha_min
    b = np.asarray(b, dtype = float)
    if b.shape != (n + 2,) or np.any(np.diff(b) <= 0) or b[0] < 0:
        raise ValueError(f'b must be {n+2} non-negative, strictly increasing values.')

    eprime, _ = expected_weighted_heights(k, heights, samples = samples, seed = seed)
    if f.lipschitz * eprime >= alpha:
        raise InfeasibleError(f'Lip*E[sum alpha^-n_i |c_i|] = {f.lipschitz*eprime} >= alpha = {alpha}.')

    eown, _ = expected_weighted_heights(k, heights, own_rates = True, samples = samples, seed = seed)
    b_star = np.min(np.diff(b))
    d = min(alpha - f.lipschitz * b[n + 1]/b[1] * eown, alpha * b_star / b[n + 1])
    if d <= 0:
        raise NoContractionError(f'Contraction rate d = {d} is not positive for b = {b.tolist()}.')

    kappa = max(k.alpha_max**n, 1.0) / min(1.0, alpha**(n + 1)) * b[n + 1]/b[1]

    return ContractionConstants(kappa_contr = float(kappa), d = float(d), b = tuple(float(v) for v in b))

def simulate_coupled(k: ErlangSumKernel, f: RateFunction, heights: JumpHeightLaw, x0: CascadeState, y0: CascadeState, T: float, seed: int, replication: int = 0, mode: str = 'lemma-bound') -> CoupledRun:
    r"""
    Simulate the coupled pair on [0, T].

    Parameters
    ----------
    * k, f, heights: 
        * The model shared by both components
    * x0, y0: CascadeState
        * Initial states
    * T: float
        * Horizon
    * seed: int
        * Master seed
    * replication: int, optional
        * Replication index. Default is 0
    * mode: str, optional
        * Domination mode. Default is 'lemma-bound'

    Returns
    -------
    * run: CoupledRun

    Notes
    -----
    Solo jumps draw fresh heights from the height stream. Every joint jump is checked to leave x - y unchanged.

    """
    if T <= 0:
        raise ValueError('The horizon T must be positive.')
    CoupledState(x0, y0)

    proposals = make_stream(seed, replication, STREAM_PROPOSALS)
    height_rng = make_stream(seed, replication, STREAM_HEIGHTS)

    first, last = k.first_indices, k.last_indices
    x, y = x0.coords.copy(), y0.coords.copy()
    clock, count = 0.0, 0
    events = {'x': ([], []), 'y': ([], [])}
    joint = solo_x = solo_y = 0

    while True:
        B = max(dominating_rate(CascadeState(k, x), f, mode), dominating_rate(CascadeState(k, y), f, mode))
        tau = exponential(proposals, B) if B > 0 else np.inf
        if clock + tau > T:
            break
        count += 1

        x, y = flow_coords(k, x, tau), flow_coords(k, y, tau)
        clock += tau
        fx, fy = f(x[first].sum()), f(y[first].sum())
        if max(fx, fy) > B * (1 + DOMINATION_TOL):
            raise DominationError(clock - tau, x, max(fx, fy)/B)

        V = proposals.random() * B
        if V <= min(fx, fy):
            c = heights.sample(height_rng)
            before = x - y
            x[last] += c
            y[last] += c
            scale = 1 + np.abs(c).max() + np.abs(x).max() + np.abs(y).max()
            if not np.allclose(x - y, before, rtol = 1e-12, atol = 1e-12 * scale):
                raise RuntimeError(f'A joint jump changed the difference of the coupled states at clock {clock}.')
            joint += 1
            for name in 'xy':
                events[name][0].append(clock)
                events[name][1].append(c)
        elif V <= fx:
            c = heights.sample(height_rng)
            x[last] += c
            solo_x += 1
            events['x'][0].append(clock)
            events['x'][1].append(c)
        elif V <= fy:
            c = heights.sample(height_rng)
            y[last] += c
            solo_y += 1
            events['y'][0].append(clock)
            events['y'][1].append(c)

    record = SeedRecord(seed, replication)
    logs = [EventLog(times, np.reshape(marks, (-1, k.L)), T, start, record, count) for (times, marks), start in zip(events.values(), (x0, y0))]

    return CoupledRun(logs[0], logs[1], joint, solo_x, solo_y)

def coupled_path(run: CoupledRun, grid, b) -> np.ndarray:
    r"""
    Columns `time, H, sum_x, sum_y` of a coupled run replayed on a grid.
    """
    xs = reconstruct_trajectory(run.x_log, grid)
    ys = reconstruct_trajectory(run.y_log, grid)
    w = h_weights(run.x_log.kernel, b)
    H = np.abs(xs.states - ys.states) @ w

    return np.column_stack([xs.grid, H, xs.sums(), ys.sums()])

def estimate_contraction(model: CascadeModel, y0: CascadeState, reps: int, t_grid, master_seed: int, b, mode: str = 'lemma-bound', verbose: bool = False) -> np.ndarray:
    r"""
    Monte Carlo estimate of $E H(X_t, \tilde X_t)$ for the coupled pair started at (model.x0, y0).

    Parameters
    ----------
    * model: CascadeModel
    * y0: CascadeState
        * Initial state of the second component
    * reps: int
        * Number of replications, reps >= 2
    * t_grid: array_like
        * Sorted times in [0, max(t_grid)]
    * master_seed: int
    * b: sequence of float
        * Weight function of H
    * mode: str, optional
        * Domination mode. Default is 'lemma-bound'
    * verbose: bool, optional
        * True to print progress. Default is False

    Returns
    -------
    * table: np.ndarray
        * Columns t, mean H, standard error

    """
    if reps < 2:
        raise ValueError('estimate_contraction needs at least 2 replications.')

    t_grid = np.asarray(t_grid, dtype = float)
    T = float(t_grid.max())
    H = np.empty((reps, t_grid.size))

    for r in range(reps):
        run = simulate_coupled(model.kernel, model.rate, model.heights, model.x0, y0, T, master_seed, r, mode)
        H[r] = coupled_path(run, t_grid, b)[:, 1]
        if verbose and (r + 1) % max(1, reps//10) == 0:
            print(f'{r + 1}/{reps} coupled replications done.')

    return np.column_stack([t_grid, H.mean(axis = 0), H.std(axis = 0, ddof = 1)/np.sqrt(reps)])
