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
Erlang-sum memory kernels

$$ h(t) = \sum_{i=1}^{L} h_i(t), \qquad h_i(t) = c_i e^{-\alpha_i t} \frac{t^{n_i}}{n_i!} $$

and the stability conditions that can be evaluated on a (kernel, rate function, jump-height law) triple: the sub-criticality condition $\|f\|_{Lip} \int_0^\infty |h| < 1$, the weighted-height condition $\|f\|_{Lip} E_G[\sum_i \alpha^{-n_i} |c_i|] < \alpha$ and the choice of the Lyapunov weight function b.

Throughout, n denotes the largest delay order, $\alpha$ the smallest and A the largest decay rate of the kernel.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.integrate import quad
from scipy.stats import gamma

from .errors import InfeasibleError, QuadratureError
from .heights import MONTE_CARLO_SAMPLES, MONTE_CARLO_SEED, JumpHeightLaw
from .rates import RateFunction

__all__ = [
    'ErlangTerm',
    'ErlangSumKernel',
    'StabilityVerdict',
    'LyapunovSpec',
    'eval_kernel',
    'l1_norm',
    'expected_weighted_heights',
    'check_stability',
    'choose_b',
    'make_lyapunov_spec',
]


@dataclass(frozen=True)
class ErlangTerm:
    r"""
    One Erlang term $c e^{-\alpha t} t^n / n!$. Its absolute value peaks at $t = n/\alpha$.

    Parameters
    ----------
    * c: float
        * Signed weight
    * alpha: float
        * Decay rate, alpha > 0
    * n: int
        * Delay order, n >= 0

    """
    c: float
    alpha: float
    n: int

    def __post_init__(self):
        if not np.isfinite(self.c):
            raise ValueError('c must be finite.')
        if not (self.alpha > 0 and np.isfinite(self.alpha)):
            raise ValueError('alpha must be a finite positive number.')
        if int(self.n) != self.n or self.n < 0:
            raise ValueError('n must be a non-negative integer.')
        object.__setattr__(self, 'n', int(self.n))

    def __call__(self, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        # c / alpha^{n+1} times the Gamma(n+1, 1/alpha) density
        return self.c / self.alpha**(self.n + 1) * gamma.pdf(t, self.n + 1, scale = 1/self.alpha)

    def abs_integral(self) -> float:
        return abs(self.c) / self.alpha**(self.n + 1)

    def abs_tail(self, t: float) -> float:
        r"""
        $\int_t^\infty |h_i(s)| ds$ through the regularized upper incomplete gamma function.
        """
        return self.abs_integral() * gamma.sf(t, self.n + 1, scale = 1/self.alpha)


class ErlangSumKernel:
    r"""
    A memory kernel $h = \sum_i h_i$ made of L Erlang terms, together with the index bookkeeping of its Markovian cascade.

    The cascade state lives in $\mathbb{R}^\kappa$ with $\kappa = L + \sum_i n_i$; coordinate (i, k), 0 <= k <= n_i, sits at position `offsets[i] + k`. Indices i are 0-based in code and 1-based in file headers.

    Parameters
    ----------
    * terms: list[ErlangTerm]
        * The L >= 1 terms, in order

    """
    def __init__(self, terms):
        terms = tuple(terms)
        if len(terms) < 1:
            raise ValueError('A kernel needs at least one Erlang term.')
        if not all(isinstance(term, ErlangTerm) for term in terms):
            raise ValueError('Kernel terms must be ErlangTerm instances.')

        self.terms = terms
        self.L = len(terms)
        self.c = np.array([term.c for term in terms], dtype = float)
        self.alpha = np.array([term.alpha for term in terms], dtype = float)
        self.n = np.array([term.n for term in terms], dtype = int)

        self.kappa = int(self.L + self.n.sum())
        self.n_max = int(self.n.max())
        self.alpha_min = float(self.alpha.min())
        self.alpha_max = float(self.alpha.max())

        self.offsets = np.concatenate([[0], np.cumsum(self.n + 1)[:-1]]).astype(int)
        self.first_indices = self.offsets.copy()
        self.last_indices = self.offsets + self.n

        # per-coordinate block index, order k and decay rate
        self.block_of = np.repeat(np.arange(self.L), self.n + 1)
        self.order_of = np.concatenate([np.arange(ni + 1) for ni in self.n])
        self.alpha_of = self.alpha[self.block_of]

        for array in (self.c, self.alpha, self.n, self.offsets, self.first_indices, self.last_indices, self.block_of, self.order_of, self.alpha_of):
            array.setflags(write = False)

    @classmethod
    def from_lists(cls, c, alpha, n) -> 'ErlangSumKernel':
        r"""
        Build a kernel from three equal-length sequences of weights, decay rates and delay orders.
        """
        c, alpha, n = list(np.atleast_1d(c)), list(np.atleast_1d(alpha)), list(np.atleast_1d(n))
        if not (len(c) == len(alpha) == len(n)):
            raise ValueError(f'c, alpha and n must have equal lengths, got {len(c)}, {len(alpha)} and {len(n)}.')

        return cls([ErlangTerm(float(ci), float(ai), int(ni)) for ci, ai, ni in zip(c, alpha, n)])

    def block(self, i: int) -> slice:
        return slice(int(self.offsets[i]), int(self.offsets[i] + self.n[i] + 1))

    def index(self, i: int, k: int) -> int:
        if not (0 <= i < self.L and 0 <= k <= self.n[i]):
            raise ValueError(f'Coordinate ({i}, {k}) does not exist for this kernel.')
        return int(self.offsets[i] + k)

    def labels(self) -> list[str]:
        r"""
        Column labels 'x_i_k' with 1-based i and 0-based k, in (i, k) lexicographic order.
        """
        return [f'x_{i+1}_{k}' for i, k in zip(self.block_of, self.order_of)]

    def __eq__(self, other) -> bool:
        return isinstance(other, ErlangSumKernel) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        return f'ErlangSumKernel(c={self.c.tolist()}, alpha={self.alpha.tolist()}, n={self.n.tolist()})'


@dataclass(frozen=True)
class StabilityVerdict:
    r"""
    Result of check_stability. Margins are (right side - left side) of the respective inequality, so a positive margin means the condition holds.

    Parameters
    ----------
    * l1_norm: float
        * $\int_0^\infty |h(t)| dt$
    * subcritical_eq3: bool or None
        * $\|f\|_{Lip} \int|h| < 1$, or None when f has no Lipschitz constant
    * eq3_margin: float or None
    * condition_ass1: bool
        * $\|f\|_{Lip} E_G[\sum_i \alpha^{-n_i}|c_i|] < \alpha$, always True for bounded f
    * ass1_margin: float or None
    * expected_heights: float
        * $E_G[\sum_i \alpha^{-n_i}|c_i|]$
    * expected_heights_stderr: float
        * Monte Carlo standard error of expected_heights (0 for constant heights)
    * notes: str

    """
    l1_norm: float
    subcritical_eq3: Optional[bool]
    eq3_margin: Optional[float]
    condition_ass1: bool
    ass1_margin: Optional[float]
    expected_heights: float
    expected_heights_stderr: float
    notes: str = ''


@dataclass(frozen=True)
class LyapunovSpec:
    r"""
    The weight function b of the Lyapunov function

    $$ V(x) = 1 + \sum_{i=1}^L \sum_{k=0}^{n_i} \frac{b(k+1)}{\alpha_i^k} |x^{(i,k)}| $$

    and every constant of the drift condition $\mathcal{L}V \leq -\lambda V + \beta 1_K$, with K the closed Euclidean ball of radius R centred at the origin.

    Parameters
    ----------
    * b: tuple[float, ...]
        * Values b(0), ..., b(n+1), strictly increasing
    * b_star: float
        * $\min_k (b(k+1) - b(k))$
    * r: float
        * $\alpha b_* / b(n+1)$
    * rate: float
        * The decay rate of the drift bound: r for bounded f, $d = (\alpha - \|f\|_{Lip} \frac{b(n+1)}{b(1)} E') \wedge r$ otherwise
    * p: float
        * Constant term of the drift bound $\mathcal{L}V \leq -rate \cdot V + p$
    * q: float
        * Level $V \geq q$ outside K
    * R: float
        * Radius of K
    * lam: float
        * $\lambda = rate - p/q$
    * beta: float
        * $\beta = p$
    * bounded: bool
        * Whether the bounded-f branch was used
    * expected_heights: float
        * $E' = E_G[\sum_i \alpha^{-n_i}|c_i|]$
    * d: float or None
        * The contraction rate $(\alpha - \|f\|_{Lip} \frac{b(n+1)}{b(1)} E_G[\sum_i \alpha_i^{-n_i}|c_i|]) \wedge r$, None when f has no Lipschitz constant

    """
    b: tuple
    b_star: float
    r: float
    rate: float
    p: float
    q: float
    R: float
    lam: float
    beta: float
    bounded: bool
    expected_heights: float
    d: Optional[float] = None

    @property
    def b_array(self) -> np.ndarray:
        return np.array(self.b, dtype = float)

    def weights(self, k: ErlangSumKernel) -> np.ndarray:
        r"""
        Per-coordinate weights $b(k+1)/\alpha_i^k$ for the kernel k.
        """
        if len(self.b) < k.n_max + 2:
            raise ValueError(f'b is defined on {{0..{len(self.b)-1}}} but the kernel needs {{0..{k.n_max+1}}}.')
        return self.b_array[k.order_of + 1] / k.alpha_of**k.order_of

    def in_K(self, coords: np.ndarray) -> bool:
        return bool(np.linalg.norm(coords) <= self.R)


def eval_kernel(k: ErlangSumKernel, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    r"""
    Evaluate $h(t) = \sum_i c_i e^{-\alpha_i t} t^{n_i}/n_i!$ with the convention $t^0 = 1$ at t = 0.

    Parameters
    ----------
    * k: ErlangSumKernel
    * t: Union[float, np.ndarray]
        * Non-negative time(s)

    Returns
    -------
    * h(t): Union[float, np.ndarray]

    """
    if np.any(np.asarray(t) < 0):
        raise ValueError('The kernel is only defined for t >= 0.')

    out = sum(term(t) for term in k.terms)

    return float(out) if np.ndim(out) == 0 else out

def l1_norm(k: ErlangSumKernel, tol: float = 1e-8) -> float:
    r"""
    Compute $\int_0^\infty |h(t)| dt$ to absolute tolerance `tol`.

    When all weights share one sign the closed form $\sum_i |c_i| / \alpha_i^{n_i+1}$ is returned. Otherwise the integral is split at a horizon $T_{tail}$ whose analytic tail bound is below tol/2, and adaptive quadrature handles $[0, T_{tail}]$.

    Parameters
    ----------
    * k: ErlangSumKernel
    * tol: float, optional
        * Absolute tolerance. Default is 1e-8

    Returns
    -------
    * norm: float

    """
    if tol <= 0:
        raise ValueError('tol must be positive.')

    if np.all(k.c >= 0) or np.all(k.c <= 0):
        return float(sum(term.abs_integral() for term in k.terms))

    # horizon where the tail bound drops below tol/2
    t_tail = float(np.max((k.n + 1) / k.alpha))
    while sum(term.abs_tail(t_tail) for term in k.terms) >= tol/2:
        t_tail *= 2

    # sign changes of h are the roots of a polynomial-exponential sum; quad copes with the kinks given enough subintervals
    result = quad(lambda t: abs(eval_kernel(k, t)), 0.0, t_tail, epsabs = tol/2, epsrel = 0.0, limit = 500, full_output = 1)
    estimate, error = result[0], result[1]

    if len(result) > 3 or error > tol/2:
        raise QuadratureError(f'L1 norm quadrature did not reach tolerance {tol}.', estimate, error)

    return float(estimate)

def expected_weighted_heights(k: ErlangSumKernel, heights: JumpHeightLaw, own_rates: bool = False, samples: int = MONTE_CARLO_SAMPLES, seed: int = MONTE_CARLO_SEED) -> tuple[float, float]:
    r"""
    $E_G[\sum_i w_i |c_i|]$ with $w_i = \alpha^{-n_i}$ ($\alpha$ the smallest decay rate) or, with `own_rates`, $w_i = \alpha_i^{-n_i}$.

    Returns
    -------
    * (mean, stderr): tuple[float, float]
        * Exact value with zero error for constant heights, seeded Monte Carlo otherwise

    """
    if heights.L != k.L:
        raise ValueError(f'The height law has {heights.L} components but the kernel has L={k.L}.')

    base = k.alpha if own_rates else np.full(k.L, k.alpha_min)
    w = base**(-k.n.astype(float))

    return heights.expectation(lambda c: np.abs(c) @ w, samples = samples, seed = seed)

def check_stability(k: ErlangSumKernel, f: RateFunction, heights: JumpHeightLaw, tol: float = 1e-8, samples: int = MONTE_CARLO_SAMPLES, seed: int = MONTE_CARLO_SEED) -> StabilityVerdict:
    r"""
    Evaluate the sub-criticality condition $\|f\|_{Lip}\int|h| < 1$ and the weighted-height condition $\|f\|_{Lip} E_G[\sum_i \alpha^{-n_i}|c_i|] < \alpha$.

    Parameters
    ----------
    * k: ErlangSumKernel
    * f: RateFunction
    * heights: JumpHeightLaw
    * tol: float, optional
        * Tolerance for the L1 norm. Default is 1e-8
    * samples, seed: int, optional
        * Monte Carlo settings for random heights

    Returns
    -------
    * verdict: StabilityVerdict

    Notes
    -----
    A bounded rate function passes the weighted-height condition by boundedness; its margin is still reported when a Lipschitz constant is known.

    """
    if f.lipschitz is None and not f.is_bounded:
        raise ValueError('Unbounded rate functions need a Lipschitz constant.')

    norm = l1_norm(k, tol)
    eprime, stderr = expected_weighted_heights(k, heights, samples = samples, seed = seed)
    notes = []

    if f.lipschitz is not None:
        eq3_margin = 1.0 - f.lipschitz * norm
        subcritical = eq3_margin > 0
        ass1_margin = k.alpha_min - f.lipschitz * eprime
    else:
        eq3_margin, subcritical, ass1_margin = None, None, None
        notes.append('sub-criticality not applicable (no Lipschitz constant)')

    if f.is_bounded:
        ass1 = True
        notes.append('weighted-height condition passes by boundedness')
    else:
        ass1 = ass1_margin > 0

    if stderr > 0:
        notes.append(f'Monte Carlo expectation over {samples} height draws')

    return StabilityVerdict(
        l1_norm = norm,
        subcritical_eq3 = subcritical,
        eq3_margin = eq3_margin,
        condition_ass1 = ass1,
        ass1_margin = ass1_margin,
        expected_heights = eprime,
        expected_heights_stderr = stderr,
        notes = '; '.join(notes)
    )

def make_lyapunov_spec(k: ErlangSumKernel, f: RateFunction, heights: JumpHeightLaw, b, samples: int = MONTE_CARLO_SAMPLES, seed: int = MONTE_CARLO_SEED) -> LyapunovSpec:
    r"""
    Derive every drift constant for a given weight function b on {0, ..., n+1}.

    Parameters
    ----------
    * k: ErlangSumKernel
    * f: RateFunction
    * heights: JumpHeightLaw
    * b: sequence of float
        * Strictly increasing, non-negative values b(0), ..., b(n+1)

    Returns
    -------
    * spec: LyapunovSpec

    Notes
    -----
    With rate = r (bounded f) or rate = d (unbounded f) the generator satisfies $\mathcal{L}V \leq -rate(V - 1) + f_0 b(n+1) E'$ where $f_0$ is $\sup f$ or $f(0)$. Taking q = 2p/rate gives $\lambda = rate/2$, and $V \geq 1 + b(1)\|x\|_2/(A^n \vee 1)$ fixes the radius R of K.

    """
    n, alpha = k.n_max, k.alpha_min
    b = np.asarray(b, dtype = float)

    if b.shape != (n + 2,):
        raise ValueError(f'b must have n+2={n+2} values, got {b.size}.')
    if b[0] < 0 or np.any(np.diff(b) <= 0):
        raise ValueError('b must be non-negative and strictly increasing.')

    eprime, _ = expected_weighted_heights(k, heights, samples = samples, seed = seed)
    b_star = float(np.min(np.diff(b)))
    r = alpha * b_star / b[n + 1]

    d = None
    if f.lipschitz is not None:
        eown, _ = expected_weighted_heights(k, heights, own_rates = True, samples = samples, seed = seed)
        d = min(alpha - f.lipschitz * b[n + 1]/b[1] * eown, r)

    if f.is_bounded:
        rate = r
        p = r + f.upper_bound * b[n + 1] * eprime
    else:
        slack = alpha - f.lipschitz * b[n + 1]/b[1] * eprime
        if slack <= 0:
            raise InfeasibleError(f'The weight function b violates the drift constraint: alpha - Lip*b(n+1)/b(1)*E = {slack} <= 0.')
        rate = min(slack, r)
        p = rate + f.value_at_zero * b[n + 1] * eprime

    q = 2*p/rate
    R = (q - 1) * max(k.alpha_max**n, 1.0) / b[1]

    return LyapunovSpec(
        b = tuple(float(v) for v in b),
        b_star = b_star,
        r = float(r),
        rate = float(rate),
        p = float(p),
        q = float(q),
        R = float(R),
        lam = float(rate - p/q),
        beta = float(p),
        bounded = f.is_bounded,
        expected_heights = float(eprime),
        d = None if d is None else float(d)
    )

def choose_b(k: ErlangSumKernel, f: RateFunction, heights: JumpHeightLaw, samples: int = MONTE_CARLO_SAMPLES, seed: int = MONTE_CARLO_SEED) -> LyapunovSpec:
    r"""
    Choose a geometric weight function $b(k) = \rho^k$, k = 0, ..., n+1, satisfying

    $$ \|f\|_{Lip} \frac{b(n+1)}{b(1)} E_G\Big[\sum_i \alpha^{-n_i}|c_i|\Big] < \alpha $$

    and derive the drift constants from it.

    Parameters
    ----------
    * k: ErlangSumKernel
    * f: RateFunction
    * heights: JumpHeightLaw
    * samples, seed: int, optional
        * Monte Carlo settings for random heights

    Returns
    -------
    * spec: LyapunovSpec

    Notes
    -----
    The constraint reads $\rho^n < \alpha / (\|f\|_{Lip} E')$, so $\rho$ is taken halfway between 1 and the largest admissible ratio $\rho_{max} = (\alpha/(\|f\|_{Lip} E'))^{1/n}$. When the constraint does not bind (bounded f, n = 0, or $\|f\|_{Lip} E' = 0$), $\rho = 2$. When $\alpha \geq 1$ any increasing b would do for bounded f, the geometric choice is kept for uniformity.

    Raises InfeasibleError if f is unbounded and $\|f\|_{Lip} E' \geq \alpha$.

    """
    n, alpha = k.n_max, k.alpha_min
    eprime, _ = expected_weighted_heights(k, heights, samples = samples, seed = seed)

    if f.is_bounded:
        rho = 2.0
    else:
        load = f.lipschitz * eprime
        if load >= alpha:
            raise InfeasibleError(f'Lip*E[sum alpha^-n_i |c_i|] = {load} >= alpha = {alpha}: no Lyapunov weight function exists.')

        if n == 0 or load == 0:
            rho = 2.0
        else:
            rho_max = (alpha/load)**(1/n)
            rho = 0.5*(1 + rho_max)

    return make_lyapunov_spec(k, f, heights, rho**np.arange(n + 2), samples = samples, seed = seed)
