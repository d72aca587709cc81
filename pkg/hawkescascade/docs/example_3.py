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

# Example 3 - Stability

The stability results for the cascade are constructive, and each ingredient has a subcommand that checks it numerically.

## Contraction under the synchronous coupling

Two copies started at $x_0$ and $y_0$ jump together at rate $\min(f(x), f(y))$ with shared heights, and alone otherwise. With an increasing weight function b the distance

$$ H(x, y) = \sum_{i, k} \frac{b(k+1)}{\alpha_i^k} |x^{(i,k)} - y^{(i,k)}| $$

decays on average like $e^{-dt}$ when f is Lipschitz and the weighted jump heights are small enough:

    hawkescascade couple --config contraction

`contraction.csv` compares the empirical mean of $H$ with the envelope $H(x_0, y_0) e^{-dt}$. When no weight function satisfies the conditions the run reports `certificate=none` and exits with status 1.

## Drift and return times

The function $V(x) = 1 + \sum_{i,k} b(k+1) \alpha_i^{-k} |x^{(i,k)}|$ satisfies $\mathcal{L}V \leq -\lambda V + \beta 1_K$ for a ball K. `drift-check` evaluates the generator at random states and `return-time` estimates $E_{x_0}[e^{\eta T_K}]$, which must not exceed $V(x_0)$:

    hawkescascade drift-check --config drift
    hawkescascade return-time --config return_time

## Minorization probes

After $n + 1$ jumps the position of a single-term cascade is a smooth function of the jump times whose Jacobian is invertible when the times are distinct. `minorization-check` compares the analytic Jacobian with finite differences on random probes, checks that merged jump times make it singular, and evaluates the jump-time density around a probe:

    hawkescascade minorization-check --config minorization

## Scripting method

```python
from hawkescascade.core import CascadeModel, CascadeState, ErlangSumKernel, JumpHeightLaw, choose_b, sigmoid
from hawkescascade.stability import estimate_return_time, verify_drift

k = ErlangSumKernel.from_lists([0.5], [1.0], [1])
f = sigmoid(base = 0.5, sigma = 2.0, beta = 1.0, rho = 0.0)
heights = JumpHeightLaw.constant([0.5])

spec = choose_b(k, f, heights)
x0 = CascadeState(k, [40.0, 20.0])
print(verify_drift(x0, k, f, heights, spec))
print(estimate_return_time(CascadeModel(k, f, heights, x0), spec, spec.lam, reps = 200, seed = 12))
```

"""
