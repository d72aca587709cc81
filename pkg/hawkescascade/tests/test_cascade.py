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
from unittest import mock

import numpy as np

from hawkescascade.core import (
    CascadeState,
    ErlangSumKernel,
    JumpHeightLaw,
    apply_jump,
    capped_power,
    constant_rate,
    dominating_rate,
    flow,
    flow_sup_bound,
    flow_sup_exact,
    generator_apply,
    intensity,
    linear_positive_part,
    make_lyapunov_spec,
    scaled_linear,
    sigmoid,
    vector_field,
)

class TestCascade(unittest.TestCase):
    r"""
    Unit tests for the cascade state space.
    Currently includes:
        - core.cascade.flow and vector_field, including the semigroup and ODE properties,
        - core.cascade.apply_jump and intensity,
        - core.cascade.flow_sup_bound, flow_sup_exact and dominating_rate, and
        - core.cascade.generator_apply for both test functions
    """

    @classmethod
    def setUpClass(cls) -> None:
        cls.rng = np.random.default_rng(7)
        cls.kernels = [
            ErlangSumKernel.from_lists([1.0], [1.0], [0]),
            ErlangSumKernel.from_lists([2.0], [1.0], [2]),
            ErlangSumKernel.from_lists([1.0, -0.5], [0.7, 1.6], [1, 3]),
            ErlangSumKernel.from_lists([1.0, 1.0, 1.0], [1.3, 0.8, 1.0], [1, 3, 2]),
        ]

    def random_state(self, k: ErlangSumKernel, scale: float = 3.0) -> CascadeState:
        return CascadeState(k, scale * self.rng.standard_normal(k.kappa))

    def test_flow_examples(self) -> None:
        k = ErlangSumKernel.from_lists([1.0], [1.0], [2])
        x = CascadeState(k, [0.0, 0.0, 2.0])
        self.assertEqual(flow(x, 0.0), x)
        y = flow(x, 1.0)
        self.assertTrue(np.allclose(y.coords, [np.exp(-1), 2*np.exp(-1), 2*np.exp(-1)], rtol = 1e-12))
        self.assertTrue(np.allclose(y.coords, [0.36788, 0.73576, 0.73576], atol = 1e-5))

        k = ErlangSumKernel.from_lists([1.0], [2.0], [1])
        y = flow(CascadeState(k, [1.0, 2.0]), 0.5)
        self.assertTrue(np.allclose(y.coords, [2*np.exp(-1), 2*np.exp(-1)], rtol = 1e-12))

        with self.assertRaises(ValueError):
            flow(x, -1.0)

        # large n t does not overflow
        k = ErlangSumKernel.from_lists([1.0], [1.0], [40])
        y = flow(CascadeState(k, np.ones(41)), 500.0)
        self.assertTrue(np.all(np.isfinite(y.coords)))

    def test_state_validation(self) -> None:
        k = self.kernels[1]
        with self.assertRaises(ValueError):
            CascadeState(k, [1.0, 2.0])
        with self.assertRaises(ValueError):
            CascadeState(k, [1.0, np.nan, 0.0])

        x = CascadeState(k, [1.0, 2.0, 3.0])
        with self.assertRaises(ValueError):
            x.coords[0] = 5.0
        self.assertAlmostEqual(x.total(), 6.0, places = 12)
        self.assertAlmostEqual(x.first_sum(), 1.0, places = 12)

    def test_semigroup(self) -> None:
        for k in self.kernels:
            for _ in range(100):
                x = self.random_state(k)
                s, t = self.rng.uniform(0, 10, 2)
                self.assertTrue(np.allclose(flow(flow(x, s), t).coords, flow(x, s + t).coords, rtol = 1e-9, atol = 1e-12))

    def test_vector_field(self) -> None:
        for k in self.kernels:
            self.assertTrue(np.array_equal(vector_field(CascadeState.zeros(k)), np.zeros(k.kappa)))

        k = ErlangSumKernel.from_lists([1.0], [1.0], [1])
        self.assertTrue(np.allclose(vector_field(CascadeState(k, [1.0, 2.0])), [1.0, -2.0], rtol = 1e-12))

        # one-sided difference quotient of the flow at t = 0
        h = 1e-6
        for k in self.kernels:
            for _ in range(100):
                x = self.random_state(k, scale = 1.0)
                quotient = (flow(x, h).coords - x.coords) / h
                self.assertTrue(np.allclose(quotient, vector_field(x), atol = 1e-4))

    def test_flow_structure(self) -> None:
        for k in self.kernels:
            for _ in range(50):
                x = CascadeState(k, np.abs(self.rng.standard_normal(k.kappa)))
                for t in self.rng.uniform(0, 20, 5):
                    self.assertTrue(np.all(flow(x, t).coords >= 0))

        # perturbing block 1 leaves block 0 untouched
        k = self.kernels[3]
        x = self.random_state(k)
        coords = x.coords.copy()
        coords[k.block(1)] += self.rng.standard_normal(int(k.n[1]) + 1)
        for t in [0.3, 1.0, 7.5]:
            self.assertTrue(np.array_equal(flow(x, t).block(0), flow(CascadeState(k, coords), t).block(0)))
            self.assertTrue(np.array_equal(flow(x, t).block(2), flow(CascadeState(k, coords), t).block(2)))

    def test_apply_jump(self) -> None:
        k = self.kernels[1]
        x = self.random_state(k)
        self.assertEqual(apply_jump(x, [0.0]), x)
        self.assertTrue(np.array_equal(apply_jump(CascadeState.zeros(k), [2.0]).coords, [0.0, 0.0, 2.0]))

        k = ErlangSumKernel.from_lists([1.0, 1.0], [1.0, 1.0], [0, 1])
        y = apply_jump(CascadeState(k, [1.0, 2.0, 3.0]), [0.5, -1.0])
        self.assertTrue(np.allclose(y.coords, [1.5, 2.0, 2.0], rtol = 1e-12))

        with self.assertRaises(ValueError):
            apply_jump(y, [1.0])
        with self.assertRaises(ValueError):
            apply_jump(y, [1.0, np.inf])

    def test_intensity(self) -> None:
        k = self.kernels[1]
        self.assertAlmostEqual(intensity(self.random_state(k), constant_rate(2.0)), 2.0, places = 12)
        self.assertAlmostEqual(intensity(CascadeState(k, [-2.0, 1.0, 1.0]), linear_positive_part(1.0)), 0.0, places = 12)
        self.assertAlmostEqual(intensity(CascadeState(k, [5.0, 0.3, -1.0]), scaled_linear(1.0, 5.0)), 2.0, places = 12)

        k = ErlangSumKernel.from_lists([1.0, 1.0], [1.0, 1.0], [0, 1])
        self.assertAlmostEqual(intensity(CascadeState(k, [1.0, 2.0, 3.0]), scaled_linear(0.0, 1.0)), 3.0, places = 12)

    def test_flow_sup_bound(self) -> None:
        k = ErlangSumKernel.from_lists([1.0], [1.0], [2])
        self.assertEqual(flow_sup_bound(CascadeState.zeros(k)), 0.0)
        self.assertAlmostEqual(flow_sup_bound(CascadeState(k, [0.2, -1.0, 0.5])), np.e, places = 12)

        k = ErlangSumKernel.from_lists([1.0], [0.5], [3])
        value = flow_sup_bound(CascadeState(k, [2.0, 0.0, 0.0, -1.0]))
        self.assertAlmostEqual(value, 2*np.e*(6/np.e)**3, places = 9)
        self.assertAlmostEqual(value, 58.4, places = 0)

    def test_flow_sup_exact(self) -> None:
        k = ErlangSumKernel.from_lists([1.0], [1.0], [0])
        self.assertAlmostEqual(flow_sup_exact(CascadeState(k, [0.5])), 0.5, places = 12)

        k = ErlangSumKernel.from_lists([1.0], [1.0], [1])
        sup, exact = flow_sup_exact(CascadeState(k, [0.0, 1.0]), full_output = True)
        self.assertTrue(exact)
        self.assertAlmostEqual(sup, np.exp(-1), places = 10)

        # a critical point above the analytic bound is reported, not clamped
        with mock.patch('hawkescascade.core.cascade.flow_sup_bound', return_value = 0.1):
            with self.assertRaises(RuntimeError):
                flow_sup_exact(CascadeState(k, [0.0, 1.0]))

        grid = np.linspace(0, 60, 3001)
        for k in self.kernels:
            for _ in range(250):
                x = self.random_state(k)
                sup = flow_sup_exact(x)
                self.assertLessEqual(sup, flow_sup_bound(x))
                along = max(np.max(np.abs(flow(x, t).coords[k.first_indices])) for t in grid[::30])
                self.assertLessEqual(along, sup * (1 + 1e-9) + 1e-12)

    def test_dominating_rate(self) -> None:
        k = ErlangSumKernel.from_lists([1.0], [1.0], [0])
        x = CascadeState(k, [0.5])
        self.assertAlmostEqual(dominating_rate(x, constant_rate(2.0)), 2.0, places = 12)
        self.assertAlmostEqual(dominating_rate(x, linear_positive_part(1.0), mode = 'exact'), 1.5, places = 12)
        self.assertAlmostEqual(dominating_rate(x, linear_positive_part(1.0)), 1 + 0.5*np.e, places = 12)
        self.assertAlmostEqual(dominating_rate(x, linear_positive_part(1.0)), 2.35914, places = 5)

        with self.assertRaises(ValueError):
            dominating_rate(x, constant_rate(2.0), mode = 'loose')

        rates = [scaled_linear(1.0, 5.0), sigmoid(1.0, 20.0, 1/3, 10.0), capped_power(1.0, 2.0, 1.5, 30.0), linear_positive_part(1.0)]
        for k in self.kernels:
            grid = np.linspace(0, 50/k.alpha_min, 401)
            for _ in range(25):
                x = self.random_state(k)
                inputs = np.array([flow(x, t).first_sum() for t in grid])
                for f in rates:
                    for mode in ['lemma-bound', 'exact']:
                        self.assertTrue(np.all(f(inputs) <= dominating_rate(x, f, mode) * (1 + 1e-9)))

    def test_generator_sum(self) -> None:
        alpha, mu = 1.2, 1.0
        k = ErlangSumKernel.from_lists([1.0], [alpha], [3])
        f, heights = linear_positive_part(mu), JumpHeightLaw.constant([1.0])
        for _ in range(20):
            x = CascadeState(k, np.abs(self.rng.standard_normal(4)))
            self.assertAlmostEqual(generator_apply('sum-S', x, f, heights), mu + (1 - alpha)*x.total(), places = 10)

        k = ErlangSumKernel.from_lists([1.0], [1.0], [3])
        self.assertAlmostEqual(generator_apply('sum-S', CascadeState.zeros(k), f, heights), 1.0, places = 12)

        with self.assertRaises(ValueError):
            generator_apply('energy', CascadeState.zeros(k), f, heights)
        with self.assertRaises(ValueError):
            generator_apply('lyapunov-V', CascadeState.zeros(k), f, heights)

    def test_generator_lyapunov(self) -> None:
        k = ErlangSumKernel.from_lists([0.8, -0.4], [1.0, 1.5], [2, 1])
        f = scaled_linear(1.0, 5.0)
        heights = JumpHeightLaw.constant(k.c)
        spec = make_lyapunov_spec(k, f, heights, [1.0, 1.5, 2.25, 3.375])
        b = spec.b_array

        for _ in range(3):
            x = self.random_state(k)
            A, B = 0.0, 0.0
            for i in range(k.L):
                n, alpha = int(k.n[i]), float(k.alpha[i])
                xi = x.block(i)
                for j in range(n + 1):
                    drift = -alpha*xi[j] + (xi[j + 1] if j < n else 0.0)
                    A += b[j + 1] / alpha**j * np.sign(xi[j]) * drift
                B += b[n + 1] / alpha**n * (abs(xi[n] + k.c[i]) - abs(xi[n]))
            B *= f(x.first_sum())

            LV, stderr = generator_apply('lyapunov-V', x, f, heights, spec = spec, full_output = True)
            self.assertAlmostEqual(LV, A + B, places = 10)
            self.assertEqual(stderr, 0.0)
