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
Foster-Lyapunov drift for the Markovian cascade. With the weight function b of a `LyapunovSpec`,

$$ V(x) = 1 + \sum_{i=1}^L \sum_{k=0}^{n_i} \frac{b(k+1)}{\alpha_i^k} |x^{(i,k)}| \quad \text{satisfies} \quad \mathcal{L}V \leq -\lambda V + \beta 1_K, $$

K being the closed Euclidean ball of radius R. As a consequence the return time $T_K$ to K has exponential moments, $E_x[e^{\eta T_K}] \leq V(x)$ for $\eta \leq \lambda$, which `estimate_return_time` checks by simulation.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ..core.cascade import CascadeModel, CascadeState, flow_coords, generator_apply
from ..core.heights import MONTE_CARLO_SAMPLES, MONTE_CARLO_SEED, JumpHeightLaw
from ..core.kernels import ErlangSumKernel, LyapunovSpec
from ..core.rates import RateFunction
from ..core.streams import STREAM_HEIGHTS, STREAM_PROPOSALS, make_stream
from ..simulation.simulator import thinning_steps

__all__ = [
    'DriftCheck',
    'ReturnTimeEstimate',
    'lyapunov_v',
    'verify_drift',
    'first_entry_time',
    'estimate_return_time',
]

# absolute slack added to every drift comparison
DRIFT_SLACK = 1e-9
# coarse grid used to locate the minimum of |phi_t(x)| on a flow segment
SEGMENT_GRID = 33


@dataclass(frozen=True)
class DriftCheck:
    r"""
    Outcome of verify_drift at one state.

    Parameters
    ----------
    * LV: float
        * Generator applied to V
    * bound: float
        * $-\lambda V(x) + \beta 1_K(x)$
    * passed: bool
        * LV <= bound + slack
    * in_K: bool
    * slack: float
        * Numerical slack used (includes three Monte Carlo standard errors for random heights)

    """
    LV: float
    bound: float
    passed: bool
    in_K: bool
    slack: float


@dataclass(frozen=True)
class ReturnTimeEstimate:
    r"""
    Monte Carlo estimate of $E_{x_0}[e^{\eta T_K}]$ and the bound V(x0) it is checked against.
    """
    estimate: float
    stderr: float
    v0: float
    eta: float
    passed: bool
    censored: int
    hitting_times: np.ndarray


def lyapunov_v(x: CascadeState, spec: LyapunovSpec) -> float:
    r"""
    $V(x) = 1 + \sum_{i,k} b(k+1) \alpha_i^{-k} |x^{(i,k)}|$.
    """
    return float(1.0 + spec.weights(x.kernel) @ np.abs(x.coords))

def verify_drift(x: CascadeState, k: ErlangSumKernel, f: RateFunction, heights: JumpHeightLaw, spec: LyapunovSpec, samples: int = MONTE_CARLO_SAMPLES, seed: int = MONTE_CARLO_SEED) -> DriftCheck:
    r"""
    Check $\mathcal{L}V(x) \leq -\lambda V(x) + \beta 1_K(x)$ at one state.

    Parameters
    ----------
    * x: CascadeState
    * k: ErlangSumKernel
    * f: RateFunction
    * heights: JumpHeightLaw
    * spec: LyapunovSpec
        * Usually produced by choose_b with the same Monte Carlo settings
    * samples, seed: int, optional
        * Monte Carlo settings for random heights

    Returns
    -------
    * check: DriftCheck

    Notes
    -----
    Coordinates that are exactly zero contribute with sg(0) = 0.

    """
    if x.kernel != k:
        raise ValueError('The state belongs to a different kernel.')

    LV, stderr = generator_apply('lyapunov-V', x, f, heights, spec = spec, samples = samples, seed = seed, full_output = True)
    V = lyapunov_v(x, spec)
    in_K = spec.in_K(x.coords)
    bound = -spec.lam * V + (spec.beta if in_K else 0.0)
    slack = DRIFT_SLACK * (1.0 + abs(LV) + abs(bound)) + 3*stderr

    return DriftCheck(LV = float(LV), bound = float(bound), passed = bool(LV <= bound + slack), in_K = in_K, slack = float(slack))

def first_entry_time(k: ErlangSumKernel, coords: np.ndarray, duration: float, radius: float) -> Optional[float]:
    r"""
    First $s \in [0, duration]$ with $\|\varphi_s(x)\|_2 \leq radius$, or None.

    The norm is scanned on a coarse grid, its minimum is refined with bounded Brent minimization, and the entry time is located by root bracketing between the last exterior point and the first interior point.
    """
    norm = lambda s: np.linalg.norm(flow_coords(k, coords, s))
    gap = lambda s: norm(s) - radius

    if gap(0.0) <= 0:
        return 0.0
    if duration <= 0:
        return None

    grid = np.linspace(0.0, duration, SEGMENT_GRID)
    values = np.array([gap(s) for s in grid])
    inside = np.flatnonzero(values <= 0)

    if inside.size == 0:
        j = int(np.argmin(values))
        lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, grid.size - 1)]
        res = minimize_scalar(gap, bounds = (lo, hi), method = 'bounded', options = {'xatol': 1e-8})
        if res.fun > 0:
            return None
        hi = float(res.x)
    else:
        j = int(inside[0])
        lo, hi = grid[j - 1], grid[j]

    return float(brentq(gap, lo, hi, xtol = 1e-10))

def estimate_return_time(model: CascadeModel, spec: LyapunovSpec, eta: float, reps: int, seed: int, time_cap: float = 1e3, mode: str = 'lemma-bound', verbose: bool = False) -> ReturnTimeEstimate:
    r"""
    Monte Carlo estimate of $E_{x_0}[e^{\eta T_K}]$, compared with V(x0).

    Parameters
    ----------
    * model: CascadeModel
        * The model and its initial state x0
    * spec: LyapunovSpec
        * Gives K, $\lambda$ and V
    * eta: float
        * $0 \leq \eta \leq \lambda$
    * reps: int
        * Number of replications, reps >= 2
    * seed: int
        * Master seed, replication r uses the streams (seed, r, .)
    * time_cap: float, optional
        * Replications that have not entered K by this time are censored at time_cap. Default is 1e3
    * mode: str, optional
        * Domination mode. Default is 'lemma-bound'
    * verbose: bool, optional
        * True to print the result. Default is False

    Returns
    -------
    * result: ReturnTimeEstimate
        * passed is True iff estimate <= V(x0) (1 + 3 relative standard error)

    Notes
    -----
    Censoring can only lower the estimate, so a passing check stays valid.

    """
    if not 0 <= eta <= spec.lam:
        raise ValueError(f'eta must lie in [0, lambda] = [0, {spec.lam}].')
    if reps < 2:
        raise ValueError('estimate_return_time needs at least 2 replications.')

    k = model.kernel
    v0 = lyapunov_v(model.x0, spec)
    hits = np.zeros(reps)
    censored = 0

    if not spec.in_K(model.x0.coords):
        for r in range(reps):
            proposals = make_stream(seed, r, STREAM_PROPOSALS)
            height_rng = make_stream(seed, r, STREAM_HEIGHTS)
            hit = None

            for step in thinning_steps(model, time_cap, proposals, height_rng, mode):
                entry = first_entry_time(k, step.before, step.tau, spec.R)
                if entry is not None:
                    hit = step.clock + entry
                    break
                if step.accepted and spec.in_K(step.after):
                    hit = step.clock + step.tau
                    break

            if hit is None:
                censored += 1
                hit = time_cap
            hits[r] = hit

    values = np.exp(eta * hits)
    estimate = float(values.mean())
    stderr = float(values.std(ddof = 1) / np.sqrt(reps))
    passed = estimate <= v0 * (1 + 3*stderr/estimate)

    if verbose:
        print(f'E[exp(eta T_K)] = {estimate:.6g} +/- {stderr:.3g}, V(x0) = {v0:.6g}, censored = {censored}/{reps}.')

    return ReturnTimeEstimate(estimate, stderr, v0, float(eta), bool(passed), censored, hits)
