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

# Example 1 - Simulating a trajectory

A non-linear Hawkes process with intensity $\lambda_t = f(\sum_{T_j < t} h(t - T_j))$ and an Erlang-sum kernel

$$ h(t) = \sum_{i=1}^L c_i e^{-\alpha_i t} \frac{t^{n_i}}{n_i!} $$

is the first coordinate of a piecewise deterministic Markov process with $\kappa = \sum_i (n_i + 1)$ coordinates, the Markovian cascade. Between events the cascade follows a linear flow; at an event the last coordinate of every block jumps by the height $c_i$. hawkescascade simulates the cascade exactly by thinning against a bound on the rate along the flow.

## Configuration file method

The bundled configuration `fig1` describes a kernel $h(t) = 2 e^{-t} t^2 / 2$ with the rate $f(y) = \max(0, 1 + y/5)$:

```
[general]
seed = 1
T = 20.0
trajectory_step = 0.02
output = 'output_fig1'

[kernel]
c = [2.0]
alpha = [1.0]
n = [2]

[rate]
family = 'scaled-linear'
base = 1.0
scale = 5.0

[initial]
x0 = 'zero'
```

Running

    hawkescascade simulate --config fig1

writes `events.csv` (event index, time and heights), `trajectory.csv` (every cascade coordinate on the time grid), `report.txt` (event counts and the stability verdict) and `manifest.txt` (configuration hash, seed and version) into `output_fig1`. The coordinates $X^{(0)}, X^{(1)}, X^{(2)}$ get smoother as their index decreases, since only $X^{(2)}$ jumps.

Kernels with several terms write one extra file per block. The configuration `fig6` uses three terms with orders 1, 3 and 2 and shared $N(0, 25)$ jump heights:

    hawkescascade simulate --config fig6

which adds `trajectory_block_1.csv`, `trajectory_block_2.csv` and `trajectory_block_3.csv`.

## Scripting method

```python
import numpy as np

from hawkescascade.core import CascadeState, ErlangSumKernel, JumpHeightLaw, scaled_linear
from hawkescascade.simulation import reconstruct_trajectory, simulate_cascade

k = ErlangSumKernel.from_lists(c = [2.0], alpha = [1.0], n = [2])
f = scaled_linear(base = 1.0, scale = 5.0)
heights = JumpHeightLaw.constant(k.c)

log = simulate_cascade(k, f, heights, CascadeState.zeros(k), T = 20.0, seed = 1)
trajectory = reconstruct_trajectory(log, np.linspace(0.0, 20.0, 1001))

print(log.count, 'events from', log.proposal_count, 'proposals')
```

The event log fully determines the trajectory: `reconstruct_trajectory` replays it on any grid, and also returns the left limits and post-jump states at every event.

"""
