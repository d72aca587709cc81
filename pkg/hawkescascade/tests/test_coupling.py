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

import unittest

import numpy as np

from hawkescascade.core import (
    CascadeModel,
    CascadeState,
    ErlangSumKernel,
    HeightDistribution,
    InfeasibleError,
    JumpHeightLaw,
    NoContractionError,
    constant_rate,
    scaled_linear,
    sigmoid,
)
from hawkescascade.simulation import (
    CoupledState,
    batch_moments,
    contraction_constants,
    coupled_path,
    estimate_contraction,
    h_distance,
    simulate_coupled,
)

class TestCoupling(unittest.TestCase):
    r"""
    Unit tests for the Wasserstein coupling.
    Currently includes:
        - simulation.coupling.h_distance,
        - simulation.coupling.contraction_constants,
        - simulation.coupling.simulate_coupled and coupled_path, and
        - simulation.coupling.estimate_contraction against the exponential envelope
    """

    @classmethod
    def setUpClass(cls) -> None:
        cls.exp1 = ErlangSumKernel.from_lists([1.0], [1.0], [0])
        cls.f = scaled_linear(1.0, 5.0)
        cls.ones = JumpHeightLaw.constant([1.0])
        cls.rng = np.random.default_rng(5)

    def test_h_distance(self) -> None:
        x = CascadeState(self.exp1, [2.0])
        self.assertEqual(h_distance(CoupledState(x, x), [0.5, 1.0]), 0.0)
        self.assertAlmostEqual(h_distance(CoupledState(x, CascadeState(self.exp1, [0.5])), [0.5, 1.0]), 1.5, places = 12)

        with self.assertRaises(ValueError):
            CoupledState(x, CascadeState(ErlangSumKernel.from_lists([1.0], [2.0], [0]), [2.0]))
        with self.assertRaises(ValueError):
            h_distance(CoupledState(x, x), [1.0, 0.5])

        k = ErlangSumKernel.from_lists([1.0, -0.5], [0.6, 1.7], [2, 1])
        b = np.array([0.5, 1.0, 1.7, 3.0])
        n, alpha, A = k.n_max, k.alpha_min, k.alpha_max
        for _ in range(200):
            x = CascadeState(k, self.rng.standard_normal(k.kappa))
            y = CascadeState(k, self.rng.standard_normal(k.kappa))
            H = h_distance(CoupledState(x, y), b)
            l1 = np.sum(np.abs(x.coords - y.coords))
            self.assertLessEqual(b[1] / max(A**n, 1.0) * l1, H * (1 + 1e-12))
            self.assertLessEqual(H, b[n + 1] / min(1.0, alpha**(n + 1)) * l1 * (1 + 1e-12))

    def test_contraction_constants(self) -> None:
        constants = contraction_constants(self.exp1, self.f, self.ones, [0.5, 1.0])
        self.assertAlmostEqual(constants.kappa_contr, 1.0, places = 12)
        self.assertAlmostEqual(constants.d, 0.5, places = 12)
        self.assertEqual(constants.b, (0.5, 1.0))

        k = ErlangSumKernel.from_lists([0.5], [1.0], [2])
        b = np.array([1.0, 1.2, 1.5, 1.9])
        base = contraction_constants(k, self.f, JumpHeightLaw.constant([0.5]), b)
        scaled = contraction_constants(k, self.f, JumpHeightLaw.constant([0.5]), 3*b)
        self.assertAlmostEqual(base.kappa_contr, scaled.kappa_contr, places = 12)
        self.assertAlmostEqual(base.d, scaled.d, places = 12)
        self.assertGreaterEqual(base.kappa_contr, 1.0)

        with self.assertRaises(InfeasibleError):
            contraction_constants(self.exp1, scaled_linear(1.0, 0.5), self.ones, [0.5, 1.0])
        with self.assertRaises(NoContractionError):
            contraction_constants(ErlangSumKernel.from_lists([1.0], [1.0], [1]), scaled_linear(1.0, 2.0), self.ones, [0.0, 1.0, 10.0])
        with self.assertRaises(ValueError):
            contraction_constants(self.exp1, self.f, self.ones, [0.5, 1.0, 2.0])

    def test_identical_components(self) -> None:
        k = ErlangSumKernel.from_lists([1.0], [1.0], [2])
        heights = JumpHeightLaw.shared(HeightDistribution('normal', (0.5, 1.0)), 1)
        x0 = CascadeState(k, [1.0, 0.5, -0.2])
        run = simulate_coupled(k, sigmoid(1.0, 4.0, 0.5, 2.0), heights, x0, x0, 30.0, seed = 1)

        self.assertGreater(run.joint, 0)
        self.assertEqual(run.solo_x, 0)
        self.assertEqual(run.solo_y, 0)
        self.assertTrue(run.x_log.identical(run.y_log))

        path = coupled_path(run, np.linspace(0, 30, 301), [1.0, 2.0, 4.0, 8.0])
        self.assertTrue(np.array_equal(path[:, 1], np.zeros(301)))
        self.assertTrue(np.array_equal(path[:, 2], path[:, 3]))

    def test_constant_rate_coupling(self) -> None:
        x0, y0 = CascadeState(self.exp1, [3.0]), CascadeState(self.exp1, [-1.0])
        run = simulate_coupled(self.exp1, constant_rate(2.0), self.ones, x0, y0, 10.0, seed = 2)

        self.assertGreater(run.joint, 0)
        self.assertEqual(run.solo_x + run.solo_y, 0)
        self.assertTrue(np.array_equal(run.x_log.times, run.y_log.times))

        grid = np.linspace(0, 10, 101)
        H = coupled_path(run, grid, [0.5, 1.0])[:, 1]
        self.assertTrue(np.allclose(H, 4.0*np.exp(-grid), rtol = 1e-9, atol = 1e-10))

    def test_marginal_law(self) -> None:
        k = ErlangSumKernel.from_lists([0.5], [1.0], [1])
        f = sigmoid(0.5, 3.0, 1.0, 0.0)
        heights = JumpHeightLaw.constant([0.5])
        x0, y0 = CascadeState(k, [1.0, 1.0]), CascadeState(k, [-2.0, 3.0])
        t_grid = np.array([2.0, 4.0])
        reps = 400

        coupled = np.empty((reps, t_grid.size))
        for r in range(reps):
            run = simulate_coupled(k, f, heights, x0, y0, 4.0, seed = 9, replication = r)
            coupled[r] = coupled_path(run, t_grid, [1.0, 2.0, 4.0])[:, 2]
        mean, stderr = coupled.mean(axis = 0), coupled.std(axis = 0, ddof = 1)/np.sqrt(reps)

        solo = batch_moments(CascadeModel(k, f, heights, x0), reps, t_grid, master_seed = 10)
        self.assertTrue(np.all(np.abs(mean - solo[:, 1]) <= 4*np.sqrt(stderr**2 + solo[:, 2]**2)))

    def test_estimate_contraction(self) -> None:
        x0, y0 = CascadeState(self.exp1, [0.0]), CascadeState(self.exp1, [5.0])
        model = CascadeModel(self.exp1, self.f, self.ones, x0)
        b = [0.5, 1.0]
        t_grid = np.array([0.0, 1.0, 2.0, 4.0])

        table = estimate_contraction(model, y0, 300, t_grid, master_seed = 8, b = b)
        H0 = h_distance(CoupledState(x0, y0), b)
        self.assertEqual(table[0, 1], H0)
        self.assertEqual(table[0, 2], 0.0)

        d = contraction_constants(self.exp1, self.f, self.ones, b).d
        self.assertTrue(np.all(table[:, 1] - 3*table[:, 2] <= H0*np.exp(-d*t_grid) * (1 + 1e-12)))

        same = estimate_contraction(model, x0, 20, t_grid, master_seed = 8, b = b)
        self.assertTrue(np.array_equal(same[:, 1], np.zeros(t_grid.size)))
