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

# Example 2 - Validating the simulator

## Mean of $S_t$

For a single term with $c = 1$ and the rate $f(y) = (\mu + y) 1_{y \geq 0}$ the sum of the cascade coordinates $S_t$ has the mean

$$ E[S_t] = S_0 e^{(1-\alpha)t} + \frac{\mu}{\alpha - 1}\big(1 - e^{(1-\alpha)t}\big), $$

which reads $E[S_t] = S_0 + \mu t$ when $\alpha = 1$. The configurations `fig2` ($\alpha = 1$, $n = 3$) and `fig5` ($\alpha = 1.2$, $n = 3$) compare this closed form with the empirical mean over many replications:

    hawkescascade validate-moments --config fig5 --reps 1000

`moments.csv` has the columns `t, mean, stderr, theory, z`, and the run fails (exit status 1) when any $|z|$ exceeds `moments.tolerance` (3 by default). Replications are independent: replication r draws from its own streams keyed by (seed, r).

## History-based oracle

`oracle-compare` simulates every replication twice, once through the cascade and once from the explicit history sum $\sum_{T_j < t} h(t - T_j)$, with the same random streams. The event logs must be identical:

    hawkescascade oracle-compare --config poisson

The bundled `poisson` configuration uses a constant rate, for which the event times form a homogeneous Poisson process.

## Scripting method

```python
import numpy as np

from hawkescascade.core import CascadeModel, CascadeState, ErlangSumKernel, JumpHeightLaw, linear_positive_part
from hawkescascade.simulation import batch_moments, closed_form_mean

k = ErlangSumKernel.from_lists([1.0], [1.2], [3])
model = CascadeModel(k, linear_positive_part(mu = 1.0), JumpHeightLaw.constant([1.0]), CascadeState.zeros(k))

t_grid = np.arange(0.0, 31.0, 5.0)
table = batch_moments(model, reps = 1000, t_grid = t_grid, master_seed = 5)
print(np.column_stack([table, closed_form_mean(t_grid, 1.2, 1.0, 0.0)]))
```

"""
