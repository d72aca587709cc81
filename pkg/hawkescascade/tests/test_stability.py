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
    JumpHeightLaw,
    choose_b,
    constant_rate,
    flow_coords,
    make_lyapunov_spec,
    scaled_linear,
    sigmoid,
)
from hawkescascade.stability import (
    estimate_return_time,
    first_entry_time,
    lyapunov_v,
    verify_drift,
)

class TestStability(unittest.TestCase):
    r"""
    Unit tests for the Foster-Lyapunov machinery.
    Currently includes:
        - stability.lyapunov.lyapunov_v,
        - stability.lyapunov.verify_drift on three feasible configurations,
        - stability.lyapunov.first_entry_time, and
        - stability.lyapunov.estimate_return_time
    """

    @classmethod
    def setUpClass(cls) -> None:
        cls.exp1 = ErlangSumKernel.from_lists([1.0], [1.0], [0])
        cls.erlang2 = ErlangSumKernel.from_lists([0.5], [1.0], [2])
        cls.ones = JumpHeightLaw.constant([1.0])
        cls.samples = 2000

    def random_states(self, k: ErlangSumKernel, count: int, seed: int) -> list:
        rng = np.random.default_rng(seed)
        return [CascadeState(k, 10.0 * 10**rng.uniform(-2, 2) * rng.standard_normal(k.kappa)) for _ in range(count)]

    def test_lyapunov_v(self) -> None:
        spec = make_lyapunov_spec(self.exp1, scaled_linear(1.0, 5.0), self.ones, [0.5, 1.0])
        self.assertEqual(lyapunov_v(CascadeState.zeros(self.exp1), spec), 1.0)
        self.assertAlmostEqual(lyapunov_v(CascadeState(self.exp1, [2.0]), spec), 3.0, places = 12)
        self.assertAlmostEqual(lyapunov_v(CascadeState(self.exp1, [-2.0]), spec), 3.0, places = 12)

        spec = choose_b(self.erlang2, scaled_linear(1.0, 5.0), JumpHeightLaw.constant([0.5]))
        for x in self.random_states(self.erlang2, 50, 0):
            self.assertGreaterEqual(lyapunov_v(x, spec), 1.0)

    def check_sweep(self, k: ErlangSumKernel, f, heights: JumpHeightLaw, seed: int) -> None:
        spec = choose_b(k, f, heights, samples = self.samples)
        self.assertGreater(spec.lam, 0.0)
        outside = 0
        for x in self.random_states(k, 300, seed):
            check = verify_drift(x, k, f, heights, spec, samples = self.samples)
            self.assertTrue(check.passed, msg = f'drift fails at {x}: LV={check.LV}, bound={check.bound}')
            outside += not check.in_K
        self.assertGreater(outside, 0)

    def test_drift_bounded_rate(self) -> None:
        self.check_sweep(self.erlang2, sigmoid(1.0, 4.0, 0.5, 2.0), JumpHeightLaw.constant([0.5]), 1)

    def test_drift_lipschitz_rate(self) -> None:
        self.check_sweep(self.erlang2, scaled_linear(1.0, 5.0), JumpHeightLaw.constant([0.5]), 2)
        k = ErlangSumKernel.from_lists([0.8, -0.4], [1.0, 1.5], [2, 1])
        self.check_sweep(k, scaled_linear(1.0, 5.0), JumpHeightLaw.constant(k.c), 3)

    def test_drift_random_heights(self) -> None:
        heights = JumpHeightLaw.shared(HeightDistribution('normal', (0.5, 1.0)), 1)
        self.check_sweep(self.erlang2, scaled_linear(1.0, 5.0), heights, 4)

        k = ErlangSumKernel.from_lists([1.0, 1.0], [1.0, 2.0], [1, 0])
        heights = JumpHeightLaw.iid([HeightDistribution('uniform', (-0.5, 0.5)), HeightDistribution('normal', (0.0, 0.25))])
        self.check_sweep(k, scaled_linear(0.5, 4.0), heights, 5)

    def test_drift_special_states(self) -> None:
        f = sigmoid(1.0, 4.0, 0.5, 2.0)
        heights = JumpHeightLaw.constant([0.5])
        spec = choose_b(self.erlang2, f, heights)

        check = verify_drift(CascadeState.zeros(self.erlang2), self.erlang2, f, heights, spec)
        self.assertTrue(check.in_K)
        self.assertTrue(check.passed)
        self.assertAlmostEqual(check.bound, -spec.lam + spec.beta, places = 12)

        far = CascadeState(self.erlang2, [10*spec.R, -5*spec.R, 3*spec.R])
        check = verify_drift(far, self.erlang2, f, heights, spec)
        self.assertFalse(check.in_K)
        self.assertTrue(check.passed)

        with self.assertRaises(ValueError):
            verify_drift(CascadeState.zeros(self.exp1), self.erlang2, f, heights, spec)

    def test_first_entry_time(self) -> None:
        coords = np.array([4.0])
        self.assertAlmostEqual(first_entry_time(self.exp1, coords, 10.0, 0.5), np.log(8.0), places = 8)
        self.assertEqual(first_entry_time(self.exp1, coords, 10.0, 5.0), 0.0)
        self.assertIsNone(first_entry_time(self.exp1, coords, 1.0, 0.5))

        k = ErlangSumKernel.from_lists([1.0], [1.0], [1])
        coords = np.array([3.0, -3.0])
        t = first_entry_time(k, coords, 20.0, 0.5)
        self.assertIsNotNone(t)
        self.assertAlmostEqual(np.linalg.norm(flow_coords(k, coords, t)), 0.5, places = 8)

    def test_return_time(self) -> None:
        # without jumps the hitting time of K is deterministic
        heights = self.ones
        spec = choose_b(self.exp1, constant_rate(0.0), heights)
        self.assertAlmostEqual(spec.R, 0.5, places = 12)
        model = CascadeModel(self.exp1, constant_rate(0.0), heights, CascadeState(self.exp1, [4.0]))
        result = estimate_return_time(model, spec, spec.lam, 5, seed = 0, time_cap = 200.0)
        self.assertTrue(np.allclose(result.hitting_times, np.log(8.0), rtol = 1e-8))
        self.assertAlmostEqual(result.estimate, 8.0**spec.lam, places = 6)
        self.assertAlmostEqual(result.v0, 9.0, places = 12)
        self.assertEqual(result.censored, 0)
        self.assertTrue(result.passed)

        inside = CascadeModel(self.exp1, constant_rate(0.0), heights, CascadeState(self.exp1, [0.1]))
        result = estimate_return_time(inside, spec, spec.lam, 5, seed = 0)
        self.assertEqual(result.estimate, 1.0)
        self.assertTrue(result.passed)

        with self.assertRaises(ValueError):
            estimate_return_time(model, spec, 2*spec.lam, 5, seed = 0)

        k = ErlangSumKernel.from_lists([0.5], [1.0], [1])
        f = sigmoid(0.5, 2.0, 1.0, 0.0)
        heights = JumpHeightLaw.constant([0.5])
        spec = choose_b(k, f, heights)
        model = CascadeModel(k, f, heights, CascadeState(k, [40.0, 20.0]))
        result = estimate_return_time(model, spec, spec.lam, 30, seed = 11, time_cap = 200.0)
        self.assertEqual(result.censored, 0)
        self.assertTrue(np.all(result.hitting_times > 0))
        self.assertTrue(result.passed)
