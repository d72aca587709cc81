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
Numerical probes of the minorization (Doeblin) ingredients of the Markovian cascade.

Start at $x$ and let m jumps with heights $c_1, \ldots, c_m$ happen at times $T - s_1 < \ldots < T - s_m$, that is $T > s_1 > \ldots > s_m > 0$. By linearity of the flow the position at time T is

$$ \gamma(x, \bar c, \bar s) = \varphi_T(x) + \sum_{k=1}^m \varphi_{s_k}\Big(\sum_i c_k^i e_{(i,n_i)}\Big), $$

which for L = 1 reads $\varphi_T(x) + \sum_k c_k e^{-\alpha s_k} v(s_k)$ with $v(s) = (s^n/n!, \ldots, s, 1)$. With m = n + 1 jumps, $\bar s \mapsto \gamma$ is a local diffeomorphism wherever its Jacobian is invertible, and the law of $X_T$ has a density bounded below through the jump-time density

$$ q_{x,\bar c}(\bar s) = \prod_{k=1}^{m} f\big(\varphi^{(0)}_{s_{k-1}-s_k}(x_{k-1})\big)\, e(x_{k-1}, s_{k-1}-s_k) \cdot e(x_m, s_m), \qquad s_0 = T, $$

where $x_k$ is the state just after the k-th jump and $e(x,t) = \exp(-\int_0^t f(\varphi^{(0)}_u(x)) du)$ is the survival factor. The Doeblin constant itself is not computed; the probes certify Jacobian invertibility and density positivity.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad

from ..core.cascade import CascadeState, flow_coords, flow_first, flow_weights
from ..core.errors import QuadratureError
from ..core.heights import JumpHeightLaw
from ..core.kernels import ErlangSumKernel
from ..core.rates import RateFunction
from ..core.streams import STREAM_STATES, make_stream

__all__ = [
    'MinorizationProbe',
    'GeneralProbeReport',
    'NeighborhoodReport',
    'make_probe',
    'gamma_map',
    'gamma_jacobian',
    'jacobian_columns',
    'finite_difference_jacobian',
    'survival',
    'jump_time_density',
    'minorization_probe_general',
    'probe_neighborhood',
]

SURVIVAL_TOL = 1e-8


@dataclass(frozen=True, eq = False)
class MinorizationProbe:
    r"""
    A starting point, jump heights and reversed jump times.

    Parameters
    ----------
    * x_star: CascadeState
        * Starting point
    * c_star: np.ndarray
        * Jump heights, shape (m, L)
    * s: np.ndarray
        * Reversed jump times $s_1 > \ldots > s_m > 0$, the k-th jump happens at $T - s_k$
    * T: float
        * Horizon, $T > s_1$

    """
    x_star: CascadeState
    c_star: np.ndarray
    s: np.ndarray
    T: float

    def __post_init__(self):
        L = self.x_star.kernel.L
        c = np.array(self.c_star, dtype = float).reshape(-1, L)
        s = np.array(self.s, dtype = float).reshape(-1)
        if c.shape[0] != s.size:
            raise ValueError(f'{s.size} jump times but {c.shape[0]} height vectors.')
        if not np.all(np.isfinite(c)):
            raise ValueError('Probe heights must be finite.')
        object.__setattr__(self, 'c_star', c)
        object.__setattr__(self, 's', s)

    @property
    def kernel(self) -> ErlangSumKernel:
        return self.x_star.kernel

    @property
    def m(self) -> int:
        return int(self.s.size)

    def is_admissible(self) -> bool:
        r"""
        True iff $T > s_1 > \ldots > s_m > 0$.
        """
        s = self.s
        return bool(s.size > 0 and s[0] < self.T and s[-1] > 0 and np.all(np.diff(s) < 0))

    def with_s(self, s) -> 'MinorizationProbe':
        return MinorizationProbe(self.x_star, self.c_star, np.asarray(s, dtype = float), self.T)

    def event_times(self) -> np.ndarray:
        return self.T - self.s


@dataclass(frozen=True)
class GeneralProbeReport:
    r"""
    Result of minorization_probe_general for a target block.

    Parameters
    ----------
    * target: int
        * 0-based target block
    * prefactor: float
        * $e^{-T\sum_{l<target} \alpha_l (n_l+1)}$
    * det_B: float
        * Determinant of the target block Jacobian with respect to the jump times
    * det_product: float
        * prefactor * det_B
    * det_analytic: float
        * Determinant of the assembled analytic Jacobian of the map
    * det_numeric: float
        * Determinant of its finite-difference Jacobian
    * lower_left_max: float
        * Largest entry of the block that must vanish (target block with respect to the earlier initial coordinates)
    * relative_error: float
        * |det_numeric - det_product| / |det_product|
    * invertible: bool

    """
    target: int
    prefactor: float
    det_B: float
    det_product: float
    det_analytic: float
    det_numeric: float
    lower_left_max: float
    relative_error: float
    invertible: bool


@dataclass(frozen=True)
class NeighborhoodReport:
    r"""
    Smallest jump-time density and Jacobian determinant over sampled admissible jump-time vectors within `radius` of a probe.
    """
    radius: float
    samples: int
    admissible: int
    min_density: float
    min_abs_det: float
    density_certified: bool


def make_probe(k: ErlangSumKernel, heights: JumpHeightLaw, T: float, x_star: Optional[CascadeState] = None, target: int = 0) -> MinorizationProbe:
    r"""
    A default probe with $n_{target} + 1$ evenly spaced jumps on (0, T) and heights at the midpoints of the support intervals of the height law.
    """
    if T <= 0:
        raise ValueError('T must be positive.')
    if not 0 <= target < k.L:
        raise ValueError(f'target must be a block index in [0, {k.L}).')

    m = int(k.n[target]) + 1
    c = np.array([np.mean(law.support_interval()) for law in heights.component_laws()])
    s = T * np.arange(m, 0, -1) / (m + 1)
    x_star = CascadeState.zeros(k) if x_star is None else x_star

    return MinorizationProbe(x_star, np.tile(c, (m, 1)), s, T)

def _jump_response(k: ErlangSumKernel, c: np.ndarray, s: float) -> np.ndarray:
    # phi_s applied to sum_i c^i e_{(i,n_i)}
    out = np.zeros(k.kappa)
    out[k.last_indices] = c
    return flow_coords(k, out, s)

def _jump_derivative(k: ErlangSumKernel, c: np.ndarray, s: float) -> np.ndarray:
    # d/ds of _jump_response: block i is c^i e^{-alpha_i s} (v'(s) - alpha_i v(s))
    out = np.zeros(k.kappa)
    for i in range(k.L):
        n, alpha = int(k.n[i]), float(k.alpha[i])
        w = flow_weights(s, alpha, n)
        v = w[::-1]
        dv = np.append(w[:-1][::-1], 0.0)
        out[k.block(i)] = c[i] * (dv - alpha*v)

    return out

def gamma_map(probe: MinorizationProbe) -> np.ndarray:
    r"""
    Position $\gamma(x, \bar c, \bar s)$ at time T after the probe's jumps.

    Parameters
    ----------
    * probe: MinorizationProbe
        * Must be admissible

    Returns
    -------
    * gamma: np.ndarray
        * Point of $\mathbb{R}^\kappa$ (for L = 1, $\mathbb{R}^{n+1}$)

    """
    if not probe.is_admissible():
        raise ValueError(f'Inadmissible jump times {probe.s.tolist()} for horizon {probe.T}.')

    k = probe.kernel
    gamma = flow_coords(k, probe.x_star.coords, probe.T)
    for c, s in zip(probe.c_star, probe.s):
        gamma = gamma + _jump_response(k, c, s)

    return gamma

def gamma_jacobian(probe: MinorizationProbe, block: Optional[int] = None) -> tuple[np.ndarray, float]:
    r"""
    Analytic Jacobian $\partial\gamma/\partial\bar s$ and its determinant.

    For L = 1 the k-th column is $c_k e^{-\alpha s_k}(v'(s_k) - \alpha v(s_k))$, i.e. $c_k e^{-\alpha s_k}(s_k^{n-1}/(n-1)! - \alpha s_k^n/n!, \ldots, 1 - \alpha s_k, -\alpha)$.

    Parameters
    ----------
    * probe: MinorizationProbe
        * Admissible, with $n_{block} + 1$ jumps
    * block: int, optional
        * Restrict $\gamma$ to this block (0-based). Required when L > 1

    Returns
    -------
    * (J, det): tuple[np.ndarray, float]

    """
    k = probe.kernel
    if block is None:
        if k.L > 1:
            raise ValueError('gamma_jacobian needs a block index when L > 1.')
        block = 0
    if not probe.is_admissible():
        raise ValueError(f'Inadmissible jump times {probe.s.tolist()} for horizon {probe.T}.')
    if probe.m != k.n[block] + 1:
        raise ValueError(f'Block {block} needs {k.n[block] + 1} jumps, the probe has {probe.m}.')

    J = jacobian_columns(k, probe.c_star, probe.s, block)

    return J, float(np.linalg.det(J))

def jacobian_columns(k: ErlangSumKernel, c_star: np.ndarray, s, block: int = 0) -> np.ndarray:
    r"""
    Derivatives of block $\gamma^{(block,\cdot)}$ with respect to each jump time, one column per jump. No admissibility check is made, so merged or reordered times can be inspected.
    """
    sl = k.block(block)
    return np.column_stack([_jump_derivative(k, np.asarray(c, dtype = float), float(t))[sl] for c, t in zip(c_star, s)])

def finite_difference_jacobian(fn, z: np.ndarray, h: float = 1e-6) -> np.ndarray:
    r"""
    Central-difference Jacobian of a vector function at z.
    """
    z = np.asarray(z, dtype = float)
    columns = []
    for j in range(z.size):
        e = np.zeros(z.size)
        e[j] = h
        columns.append((np.asarray(fn(z + e)) - np.asarray(fn(z - e))) / (2*h))

    return np.column_stack(columns)

def survival(x: CascadeState, t: float, f: RateFunction) -> float:
    r"""
    Survival factor $e(x, t) = \exp(-\int_0^t f(\sum_i \varphi_u^{(i,0)}(x)) du)$, the probability of no jump on [0, t] from x.

    Raises QuadratureError if the integral cannot be computed to SURVIVAL_TOL.
    """
    if t < 0:
        raise ValueError('t must be non-negative.')
    if t == 0:
        return 1.0

    k = x.kernel
    integrand = lambda u: f(flow_first(k, x.coords, u).sum())
    result = quad(integrand, 0.0, t, epsabs = SURVIVAL_TOL, epsrel = SURVIVAL_TOL, limit = 200, full_output = 1)
    estimate, error = result[0], result[1]
    if len(result) > 3 and error > SURVIVAL_TOL * max(1.0, abs(estimate)):
        raise QuadratureError(f'Survival integral did not converge on [0, {t}].', estimate, error)

    return float(np.exp(-estimate))

def jump_time_density(probe: MinorizationProbe, f: RateFunction) -> float:
    r"""
    The jump-time density $q_{x,\bar c}(\bar s)$ of the probe's jump sequence.

    Parameters
    ----------
    * probe: MinorizationProbe
        * Admissible
    * f: RateFunction

    Returns
    -------
    * q: float
        * Strictly positive whenever f.lower_bound > 0

    """
    if not probe.is_admissible():
        raise ValueError(f'Inadmissible jump times {probe.s.tolist()} for horizon {probe.T}.')

    k = probe.kernel
    state = probe.x_star
    previous = probe.T
    q = 1.0

    for c, s in zip(probe.c_star, probe.s):
        gap = previous - s
        left = flow_coords(k, state.coords, gap)
        q *= f(left[k.first_indices].sum()) * survival(state, gap, f)
        left[k.last_indices] += c
        state = CascadeState(k, left)
        previous = s

    return float(q * survival(state, previous, f))

def minorization_probe_general(probe: MinorizationProbe, target: int, h: float = 1e-6, rtol: float = 1e-6) -> GeneralProbeReport:
    r"""
    Check the block-triangular structure of the map

    $$ \Phi: (x^{(l,\cdot)})_{l < target}, \bar s \mapsto \big((\gamma^{(l,\cdot)})_{l < target}, \gamma^{(target,\cdot)}\big) $$

    whose Jacobian is $\begin{pmatrix} A & * \\ 0 & B \end{pmatrix}$, where A is the flow matrix of the earlier blocks with determinant $e^{-T\sum_{l<target}\alpha_l(n_l+1)}$ and B the target block Jacobian with respect to the jump times.

    Parameters
    ----------
    * probe: MinorizationProbe
        * Admissible, with $n_{target} + 1$ jumps and non-zero heights in every block
    * target: int
        * 0-based target block
    * h: float, optional
        * Finite-difference step. Default is 1e-6
    * rtol: float, optional
        * Relative tolerance of the determinant comparison. Default is 1e-6

    Returns
    -------
    * report: GeneralProbeReport

    """
    k = probe.kernel
    if not 0 <= target < k.L:
        raise ValueError(f'target must be a block index in [0, {k.L}).')
    zero_blocks = np.flatnonzero(np.any(probe.c_star == 0, axis = 0))
    if zero_blocks.size:
        raise ValueError(f'Probe heights must be non-zero in every block, found zeros in blocks {zero_blocks.tolist()}.')

    pre = int(k.offsets[target])
    sl = k.block(target)

    def phi(z):
        coords = probe.x_star.coords.copy()
        coords[:pre] = z[:pre]
        g = gamma_map(MinorizationProbe(CascadeState(k, coords), probe.c_star, z[pre:], probe.T))
        return np.concatenate([g[:pre], g[sl]])

    z0 = np.concatenate([probe.x_star.coords[:pre], probe.s])

    # analytic assembly: flow matrix of the earlier blocks and jump-time derivatives
    A = np.column_stack([flow_coords(k, np.eye(k.kappa)[j], probe.T)[:pre] for j in range(pre)]) if pre else np.empty((0, 0))
    ds = np.column_stack([_jump_derivative(k, c, s) for c, s in zip(probe.c_star, probe.s)])
    top = np.hstack([A, ds[:pre]])
    bottom = np.hstack([np.zeros((int(k.n[target]) + 1, pre)), ds[sl]])
    J = np.vstack([top, bottom])

    _, det_B = gamma_jacobian(probe, block = target)
    prefactor = float(np.exp(-probe.T * np.sum(k.alpha[:target] * (k.n[:target] + 1))))
    det_product = prefactor * det_B

    J_fd = finite_difference_jacobian(phi, z0, h)
    det_numeric = float(np.linalg.det(J_fd))
    lower_left = float(np.max(np.abs(J_fd[pre:, :pre]))) if pre else 0.0
    rel = abs(det_numeric - det_product) / abs(det_product) if det_product != 0 else np.inf

    return GeneralProbeReport(
        target = target,
        prefactor = prefactor,
        det_B = det_B,
        det_product = det_product,
        det_analytic = float(np.linalg.det(J)),
        det_numeric = det_numeric,
        lower_left_max = lower_left,
        relative_error = float(rel),
        invertible = bool(det_product != 0 and rel <= rtol)
    )

def probe_neighborhood(probe: MinorizationProbe, f: RateFunction, radius: float, samples: int = 200, seed: int = 0, block: Optional[int] = None) -> NeighborhoodReport:
    r"""
    Sample jump-time vectors uniformly in the Euclidean ball of the given radius around probe.s and report, over the admissible ones, the smallest density q and the smallest |det| of the jump-time Jacobian.

    The radius plays the role of the neighborhood size in the Doeblin argument and is left to the user.
    """
    if radius <= 0:
        raise ValueError('radius must be positive.')

    rng = make_stream(seed, 0, STREAM_STATES)
    m = probe.m
    block = 0 if block is None and probe.kernel.L == 1 else block

    min_q, min_det, admissible = np.inf, np.inf, 0
    for _ in range(samples):
        direction = rng.standard_normal(m)
        direction /= np.linalg.norm(direction)
        candidate = probe.with_s(probe.s + radius * rng.random()**(1/m) * direction)
        if not candidate.is_admissible():
            continue
        admissible += 1
        min_q = min(min_q, jump_time_density(candidate, f))
        if block is not None:
            min_det = min(min_det, abs(gamma_jacobian(candidate, block)[1]))

    return NeighborhoodReport(
        radius = float(radius),
        samples = samples,
        admissible = admissible,
        min_density = float(min_q),
        min_abs_det = float(min_det),
        density_certified = bool(f.lower_bound > 0 and admissible > 0 and min_q > 0)
    )
