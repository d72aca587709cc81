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
Exact simulation of the Markovian cascade by thinning, an independent simulator that computes the intensity from the explicit event history, deterministic replay of trajectories and Monte Carlo moments of $S_t = \sum_{i,k} X_t^{(i,k)}$.

The thinning loop works on a snapshot x at clock D: it proposes a waiting time $\tau \sim Exp(f^*(x))$, flows to $\varphi_\tau(x)$ and accepts a jump with probability $f(\sum_i \varphi_\tau^{(i,0)}(x))/f^*(x)$. The bound $f^*$ is recomputed after every proposal.
"""

from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np
from scipy.special import factorial

from ..core.cascade import CascadeModel, CascadeState, dominating_rate, flow_coords, flow_first
from ..core.errors import DominationError
from ..core.heights import JumpHeightLaw
from ..core.kernels import ErlangSumKernel
from ..core.rates import RateFunction
from ..core.streams import STREAM_HEIGHTS, STREAM_PROPOSALS, SeedRecord, exponential, make_stream

__all__ = [
    'EventLog',
    'TrajectorySample',
    'Proposal',
    'DOMINATION_TOL',
    'thinning_steps',
    'simulate_cascade',
    'simulate_model',
    'simulate_direct',
    'history_input',
    'reconstruct_trajectory',
    'batch_moments',
    'closed_form_mean',
]

# acceptance ratios above 1 + DOMINATION_TOL abort the simulation
DOMINATION_TOL = 1e-9


@dataclass(eq = False)
class EventLog:
    r"""
    The output of one simulation on [0, T].

    Parameters
    ----------
    * times: np.ndarray
        * Strictly increasing jump times in (0, T]
    * heights: np.ndarray
        * Jump heights, shape (number of events, L)
    * T: float
        * Horizon
    * x0: CascadeState
        * Initial state
    * seed: SeedRecord
        * The streams that produced the log
    * proposal_count: int
        * Number of thinning proposals inside the horizon

    """
    times: np.ndarray
    heights: np.ndarray
    T: float
    x0: CascadeState
    seed: SeedRecord
    proposal_count: int = 0

    def __post_init__(self):
        L = self.x0.kernel.L
        self.times = np.asarray(self.times, dtype = float).reshape(-1)
        self.heights = np.asarray(self.heights, dtype = float).reshape(-1, L)

        if self.heights.shape[0] != self.times.size:
            raise ValueError(f'{self.times.size} event times but {self.heights.shape[0]} height vectors.')
        if not (np.all(np.isfinite(self.times)) and np.all(np.isfinite(self.heights))):
            raise ValueError('Event times and heights must be finite.')
        if self.times.size and (self.times[0] <= 0 or self.times[-1] > self.T):
            raise ValueError(f'Event times must lie in (0, {self.T}].')
        if np.any(np.diff(self.times) <= 0):
            raise ValueError('Event times must be strictly increasing.')

    @property
    def kernel(self) -> ErlangSumKernel:
        return self.x0.kernel

    @property
    def count(self) -> int:
        return int(self.times.size)

    def counting(self, t):
        r"""
        The counting process $N_t = \#\{T_j \leq t\}$ (right-continuous).
        """
        out = np.searchsorted(self.times, t, side = 'right')
        return int(out) if np.ndim(out) == 0 else out

    def identical(self, other: 'EventLog') -> bool:
        r"""
        Exact equality of horizon, initial state, event times and heights.
        """
        return (self.T == other.T and self.x0 == other.x0
                and np.array_equal(self.times, other.times) and np.array_equal(self.heights, other.heights))

    def to_table(self) -> tuple[np.ndarray, list[str]]:
        r"""
        Rows `event_index, time, height_1, ..., height_L` (event_index is 1-based) and the column names.
        """
        L = self.kernel.L
        columns = ['event_index', 'time'] + [f'height_{i+1}' for i in range(L)]
        table = np.column_stack([np.arange(1, self.count + 1), self.times, self.heights]) if self.count else np.empty((0, L + 2))

        return table, columns


@dataclass(eq = False)
class TrajectorySample:
    r"""
    States of a replayed trajectory on a time grid, together with the exact left limits $X_{T_j-}$ and post-jump states $X_{T_j}$ at every event.
    """
    grid: np.ndarray
    states: np.ndarray
    event_times: np.ndarray
    left_limits: np.ndarray
    post_jump: np.ndarray
    kernel: ErlangSumKernel = field(repr = False, default = None)

    def sums(self) -> np.ndarray:
        r"""
        $S_t$ on the grid.
        """
        return self.states.sum(axis = 1)

    def state(self, j: int) -> CascadeState:
        return CascadeState(self.kernel, self.states[j])

    def to_table(self, block: Optional[int] = None) -> tuple[np.ndarray, list[str]]:
        r"""
        Rows `time, x_i_k...` for the whole state, or for one block i (0-based) only.
        """
        labels = self.kernel.labels()
        if block is None:
            return np.column_stack([self.grid, self.states]), ['time'] + labels

        sl = self.kernel.block(block)
        return np.column_stack([self.grid, self.states[:, sl]]), ['time'] + labels[sl]


@dataclass(eq = False)
class Proposal:
    r"""
    One step of the thinning loop: starting at `before` on clock `clock`, the state flows for `tau` and ends at `after` (post-jump if `accepted`). The terminal record flows up to the horizon and carries no proposal.
    """
    clock: float
    tau: float
    before: np.ndarray
    after: np.ndarray
    accepted: bool = False
    heights: Optional[np.ndarray] = None
    terminal: bool = False


def thinning_steps(model: CascadeModel, T: float, proposals: np.random.Generator, height_rng: np.random.Generator, mode: str = 'lemma-bound', max_proposals: Optional[int] = None) -> Iterator[Proposal]:
    r"""
    Generator over the thinning proposals of one run on [0, T], ending with a terminal record that flows to T.

    Parameters
    ----------
    * model: CascadeModel
    * T: float
        * Horizon, T > 0
    * proposals: np.random.Generator
        * Stream for waiting times and acceptance uniforms, one of each per proposal
    * height_rng: np.random.Generator
        * Stream for jump heights, drawn only on acceptance
    * mode: str, optional
        * Domination mode, see dominating_rate. Default is 'lemma-bound'
    * max_proposals: int, optional
        * Abort with RuntimeError beyond this many proposals

    """
    if T <= 0:
        raise ValueError('The horizon T must be positive.')

    k, f = model.kernel, model.rate
    first = k.first_indices
    coords = model.x0.coords.copy()
    clock, count = 0.0, 0

    while True:
        fstar = dominating_rate(CascadeState(k, coords), f, mode)
        tau = exponential(proposals, fstar) if fstar > 0 else np.inf

        if clock + tau > T:
            yield Proposal(clock, T - clock, coords, flow_coords(k, coords, T - clock), terminal = True)
            return

        count += 1
        if max_proposals is not None and count > max_proposals:
            raise RuntimeError(f'More than {max_proposals} proposals before clock {clock}: the process may be exploding.')

        flowed = flow_coords(k, coords, tau)
        ratio = f(flowed[first].sum()) / fstar
        if ratio > 1 + DOMINATION_TOL:
            raise DominationError(clock, coords, ratio)

        accepted = proposals.random() <= ratio
        c = None
        if accepted:
            c = model.heights.sample(height_rng)
            flowed[k.last_indices] += c

        yield Proposal(clock, tau, coords, flowed, accepted, c)

        coords = flowed
        clock += tau

def simulate_model(model: CascadeModel, T: float, seed: int, replication: int = 0, mode: str = 'lemma-bound', max_proposals: Optional[int] = None) -> EventLog:
    r"""
    simulate_cascade for a CascadeModel bundle.
    """
    proposals = make_stream(seed, replication, STREAM_PROPOSALS)
    height_rng = make_stream(seed, replication, STREAM_HEIGHTS)

    times, heights, count = [], [], 0
    for step in thinning_steps(model, T, proposals, height_rng, mode, max_proposals):
        if step.terminal:
            break
        count += 1
        if step.accepted:
            times.append(step.clock + step.tau)
            heights.append(step.heights)

    return EventLog(times, np.reshape(heights, (-1, model.kernel.L)), T, model.x0, SeedRecord(seed, replication), count)

def simulate_cascade(k: ErlangSumKernel, f: RateFunction, heights: JumpHeightLaw, x0: CascadeState, T: float, seed: int, replication: int = 0, mode: str = 'lemma-bound', max_proposals: Optional[int] = None) -> EventLog:
    r"""
    Exact thinning simulation of the Markovian cascade on [0, T].

    Parameters
    ----------
    * k: ErlangSumKernel
    * f: RateFunction
    * heights: JumpHeightLaw
    * x0: CascadeState
        * Initial state
    * T: float
        * Horizon, T > 0
    * seed: int
        * Master seed
    * replication: int, optional
        * Replication index, selects independent streams. Default is 0
    * mode: str, optional
        * 'lemma-bound' (default) or 'exact' dominating rate
    * max_proposals: int, optional
        * Hard cap on the number of proposals

    Returns
    -------
    * log: EventLog

    Notes
    -----
    The algorithm is exact whether or not the process is stable. A DominationError means the dominating rate is wrong, never that the model is. When $f^* = 0$ no further proposal is made and the log ends with an empty tail.

    """
    return simulate_model(CascadeModel(k, f, heights, x0), T, seed, replication, mode, max_proposals)

def history_input(k: ErlangSumKernel, x0: CascadeState, times: np.ndarray, heights: np.ndarray, t: float) -> float:
    r"""
    The argument of the rate function computed from the event history,

    $$ \sum_i \varphi_t^{(i,0)}(x_0) + \sum_{T_j < t} \sum_i c_i^{(j)} e^{-\alpha_i (t - T_j)} \frac{(t - T_j)^{n_i}}{n_i!}. $$

    Only events strictly before t contribute, which gives the left limit at event times.
    """
    times = np.asarray(times, dtype = float)
    past = times < t
    lags = t - times[past]
    c = np.asarray(heights, dtype = float).reshape(-1, k.L)[past]

    total = float(flow_first(k, x0.coords, t).sum())
    for i in range(k.L):
        n = int(k.n[i])
        total += float(np.sum(c[:, i] * np.exp(-k.alpha[i]*lags) * lags**n) / factorial(n, exact = True))

    return total

def simulate_direct(k: ErlangSumKernel, f: RateFunction, heights: JumpHeightLaw, x0: CascadeState, T: float, seed: int, replication: int = 0, mode: str = 'lemma-bound', max_proposals: Optional[int] = None) -> EventLog:
    r"""
    Simulate the Hawkes process from its definition: the intensity at a proposal is $f$ of the explicit history sum (see `history_input`).

    The proposal mechanism, the dominating bound and the random streams are those of simulate_cascade. The bound is tracked on the cascade reconstruction of the history, so that both simulators propose at the same times and consume the same draws; with equal seeds the two event logs are identical.

    Parameters
    ----------
    * k, f, heights, x0, T, seed, replication, mode, max_proposals:
        * As in simulate_cascade

    Returns
    -------
    * log: EventLog

    """
    if T <= 0:
        raise ValueError('The horizon T must be positive.')

    proposals = make_stream(seed, replication, STREAM_PROPOSALS)
    height_rng = make_stream(seed, replication, STREAM_HEIGHTS)

    tracker = x0.coords.copy()
    clock, count = 0.0, 0
    times, marks = [], []

    while True:
        fstar = dominating_rate(CascadeState(k, tracker), f, mode)
        tau = exponential(proposals, fstar) if fstar > 0 else np.inf
        if clock + tau > T:
            break

        count += 1
        if max_proposals is not None and count > max_proposals:
            raise RuntimeError(f'More than {max_proposals} proposals before clock {clock}: the process may be exploding.')

        t = clock + tau
        ratio = f(history_input(k, x0, times, marks, t)) / fstar
        if ratio > 1 + DOMINATION_TOL:
            raise DominationError(clock, tracker, ratio)

        tracker = flow_coords(k, tracker, tau)
        if proposals.random() <= ratio:
            c = heights.sample(height_rng)
            tracker[k.last_indices] += c
            times.append(t)
            marks.append(c)

        clock = t

    return EventLog(times, np.reshape(marks, (-1, k.L)), T, x0, SeedRecord(seed, replication), count)

def reconstruct_trajectory(log: EventLog, grid) -> TrajectorySample:
    r"""
    Replay an event log deterministically: flow between events, add the heights at events.

    Parameters
    ----------
    * log: EventLog
    * grid: array_like
        * Sorted times in [0, T]

    Returns
    -------
    * sample: TrajectorySample
        * States on the grid (right-continuous, an event at a grid time is included) plus left limits and post-jump states at every event

    """
    grid = np.asarray(grid, dtype = float).reshape(-1)
    if np.any(np.diff(grid) < 0):
        raise ValueError('The trajectory grid must be sorted.')
    if grid.size and (grid[0] < 0 or grid[-1] > log.T):
        raise ValueError(f'The trajectory grid must lie in [0, {log.T}].')

    k = log.kernel
    left = np.empty((log.count, k.kappa))
    post = np.empty((log.count, k.kappa))

    anchor, anchor_time = log.x0.coords, 0.0
    for j, (t, c) in enumerate(zip(log.times, log.heights)):
        left[j] = flow_coords(k, anchor, t - anchor_time)
        post[j] = left[j]
        post[j, k.last_indices] += c
        anchor, anchor_time = post[j], t

    states = np.empty((grid.size, k.kappa))
    # index of the last event at or before each grid time
    last = np.searchsorted(log.times, grid, side = 'right') - 1
    for g, (t, j) in enumerate(zip(grid, last)):
        if j < 0:
            states[g] = flow_coords(k, log.x0.coords, t)
        else:
            states[g] = flow_coords(k, post[j], t - log.times[j])

    return TrajectorySample(grid, states, log.times.copy(), left, post, kernel = k)

def batch_moments(model: CascadeModel, reps: int, t_grid, master_seed: int, mode: str = 'lemma-bound', verbose: bool = False) -> np.ndarray:
    r"""
    Monte Carlo mean of $S_t$ over independent replications.

    Parameters
    ----------
    * model: CascadeModel
    * reps: int
        * Number of replications, reps >= 2
    * t_grid: array_like
        * Sorted, non-negative times
    * master_seed: int
        * Replication r uses the streams (master_seed, r, .)
    * mode: str, optional
        * Domination mode. Default is 'lemma-bound'
    * verbose: bool, optional
        * True to print progress. Default is False

    Returns
    -------
    * table: np.ndarray
        * Columns t, empirical mean of $S_t$, standard error

    """
    if reps < 2:
        raise ValueError('batch_moments needs at least 2 replications.')

    t_grid = np.asarray(t_grid, dtype = float)
    T = float(t_grid.max())
    if T <= 0:
        raise ValueError('The time grid must contain a positive time.')

    S = np.empty((reps, t_grid.size))
    for r in range(reps):
        log = simulate_model(model, T, master_seed, r, mode)
        S[r] = reconstruct_trajectory(log, t_grid).sums()
        if verbose and (r + 1) % max(1, reps//10) == 0:
            print(f'{r + 1}/{reps} replications done.')

    return np.column_stack([t_grid, S.mean(axis = 0), S.std(axis = 0, ddof = 1)/np.sqrt(reps)])

def closed_form_mean(t, alpha: float, mu: float, s0: float = 0.0):
    r"""
    Closed-form mean of $S_t$ for L = 1, c = 1, $f(y) = (\mu + y)1_{[0,\infty)}(y)$ and a non-negative initial state,

    $$ E[S_t] = S_0 e^{(1-\alpha)t} + \frac{\mu}{1-\alpha}\big(e^{(1-\alpha)t} - 1\big), \qquad E[S_t] = S_0 + \mu t \ \text{ if } \alpha = 1. $$

    It solves $\frac{d}{dt}E[S_t] = \mu + (1-\alpha)E[S_t]$.
    """
    t = np.asarray(t, dtype = float)
    if alpha == 1:
        out = s0 + mu*t
    else:
        growth = np.exp((1 - alpha)*t)
        out = s0*growth + mu/(1 - alpha)*(growth - 1)

    return float(out) if out.ndim == 0 else out
