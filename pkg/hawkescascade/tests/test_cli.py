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

import contextlib
import io
import os
import tempfile
import unittest
from unittest import mock

import numpy as np

from hawkescascade.core.analysis import SUBCOMMANDS, do_analysis
from hawkescascade.core.config import ExperimentConfig
from hawkescascade.core.entry_points import build_parser, main
from hawkescascade.core.errors import ConfigError, InfeasibleError, NoContractionError, QuadratureError
from hawkescascade.core.run import BUNDLED_CONFIGS, resolve_config

SMALL_CONFIG = """
[general]
seed = 3
replications = 5
T = 10.0
trajectory_step = 0.5
output = 'small'

[kernel]
c = [0.5, 0.3]
alpha = [1.0, 2.0]
n = [1, 0]

[rate]
family = 'sigmoid'
base = 0.5
sigma = 2.0
beta = 1.0
rho = 0.0

[heights]
mode = 'iid'
laws = [('uniform', 0.0, 1.0), ('point', 0.3)]

[oracle]
runs = 3
grid_points = 50
"""

SWEEP_CONFIG = """
[general]
seed = 4
T = 5.0
output = 'sweep'

[kernel]
c = [1.0]
alpha = [1.0]
n = [1]

[rate]
family = 'scaled-linear'
base = 1.0
scale = 5.0

[sweep]
subcommand = 'simulate'
grid = {'kernel.alpha': [[0.8], [1.0], [1.4]]}
"""

class TestCli(unittest.TestCase):
    r"""
    Unit tests for configuration files and the command line interface.
    Currently includes:
        - core.config.ExperimentConfig parsing, validation and serialization,
        - core.entry_points.main exit statuses for every subcommand, including configurations without a drift or contraction certificate, and
        - reproducibility of output directories
    """

    @classmethod
    def setUpClass(cls) -> None:
        cls.bundled = sorted(name[:-4] for name in os.listdir(BUNDLED_CONFIGS) if name.endswith('.ini'))

    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def out(self, name: str) -> str:
        return os.path.join(self.tmp.name, name)

    def run_main(self, argv: list) -> int:
        with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
            return main(argv + ['--quiet'])

    def header(self, path: str) -> list:
        with open(path) as fh:
            return fh.readline().strip().split(',')

    def read_report(self, directory: str) -> dict:
        with open(os.path.join(directory, 'report.txt')) as fh:
            return dict(line.rstrip('\n').split('=', 1) for line in fh)

    def write_config(self, text: str) -> str:
        path = self.out('config.ini')
        with open(path, 'w') as fh:
            fh.write(text)
        return path

    def test_bundled_configs(self) -> None:
        self.assertTrue({'fig1', 'fig2', 'fig3', 'fig4', 'fig5', 'fig6', 'poisson', 'contraction', 'drift', 'minorization', 'return_time'} <= set(self.bundled))
        for name in self.bundled:
            config = ExperimentConfig.from_file(resolve_config(name, self.tmp.name))
            again = ExperimentConfig.from_string(config.to_ini())
            self.assertEqual(config, again, msg = name)
            self.assertEqual(config.sha256(), again.sha256())

    def test_config_errors(self) -> None:
        with self.assertRaises(ConfigError) as ctx:
            ExperimentConfig.from_string(SMALL_CONFIG + "\n[initial]\nx1 = 'zero'\n")
        self.assertIn('initial.x1', str(ctx.exception))

        with self.assertRaises(ConfigError):
            ExperimentConfig.from_string(SMALL_CONFIG.replace("family = 'sigmoid'", "family = 'cubic'"))
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_string(SMALL_CONFIG.replace('rho = 0.0', 'rho = 0.0\nmu = 1.0'))
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_string(SMALL_CONFIG.replace('[kernel]', '[kernels]'))
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_string(SMALL_CONFIG.replace('T = 10.0', 'T = -1.0'))
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_string(SMALL_CONFIG.replace('n = [1, 0]', 'n = [1, -1]'))
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_string(SMALL_CONFIG.replace("('point', 0.3)", "('point', 0.3, 1.0)"))
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_string(SMALL_CONFIG + '\n[initial]\nx0 = [1.0, 2.0]\n')
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_string(SMALL_CONFIG).get('couple', 'y0')

        config = ExperimentConfig.from_string(SMALL_CONFIG)
        self.assertEqual(config.get('general', 'mode'), 'lemma-bound')
        self.assertEqual(config.with_overrides({'general.seed': 11}).get('general', 'seed'), 11)
        self.assertEqual(config.get('general', 'seed'), 3)
        with self.assertRaises(ConfigError):
            config.with_overrides({'seed': 11})

    def test_exit_status_config_errors(self) -> None:
        self.assertEqual(self.run_main(['simulate', '--config', 'no_such_config', '--out', self.out('a')]), 2)
        self.assertEqual(self.run_main(['validate-moments', '--config', 'fig1', '--out', self.out('b')]), 2)

        path = self.write_config(SMALL_CONFIG.replace('[kernel]', '[kernels]'))
        self.assertEqual(self.run_main(['simulate', '--config', path, '--out', self.out('c')]), 2)

        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                build_parser().parse_args(['estimate', '--config', 'fig1'])
            with self.assertRaises(SystemExit):
                build_parser().parse_args(['simulate'])

        with self.assertRaises(ValueError):
            do_analysis(ExperimentConfig.from_string(SMALL_CONFIG), 'estimate', self.out('d'), verbose = False)
        self.assertNotIn('estimate', SUBCOMMANDS)

    def test_exit_status_without_certificate(self) -> None:
        errors = [InfeasibleError('load >= alpha'), NoContractionError('d <= 0'), QuadratureError('no convergence', 0.5, 1e-3)]
        for err in errors:
            with mock.patch('hawkescascade.core.run.run', side_effect = err):
                self.assertEqual(self.run_main(['minorization-check', '--config', 'minorization', '--out', self.out('e')]), 1, msg = type(err).__name__)

    def test_simulate(self) -> None:
        first = self.out('first')
        names = ['events.csv', 'trajectory.csv', 'report.txt', 'manifest.txt']
        self.assertEqual(self.run_main(['simulate', '--config', 'fig1', '--out', first]), 0)
        contents = {}
        for name in names:
            with open(os.path.join(first, name), 'rb') as fh:
                contents[name] = fh.read()

        # a second run into the same directory rewrites identical bytes
        self.assertEqual(self.run_main(['simulate', '--config', 'fig1', '--out', first]), 0)
        for name in names:
            with open(os.path.join(first, name), 'rb') as fh:
                self.assertEqual(fh.read(), contents[name], msg = name)

        self.assertEqual(self.header(os.path.join(first, 'events.csv')), ['event_index', 'time', 'height_1'])
        self.assertEqual(self.header(os.path.join(first, 'trajectory.csv')), ['time', 'x_1_0', 'x_1_1', 'x_1_2'])

        trajectory = np.loadtxt(os.path.join(first, 'trajectory.csv'), delimiter = ',', skiprows = 1)
        self.assertEqual(trajectory[0, 0], 0.0)
        self.assertEqual(trajectory[-1, 0], 20.0)
        report = self.read_report(first)
        self.assertEqual(report['passed'], 'True')
        self.assertEqual(report['weighted_height_condition'], 'True')

        other = self.out('other')
        self.assertEqual(self.run_main(['simulate', '--config', 'fig1', '--out', other, '--seed', '2']), 0)
        with open(os.path.join(first, 'events.csv')) as fa, open(os.path.join(other, 'events.csv')) as fb:
            self.assertNotEqual(fa.read(), fb.read())

    def test_simulate_blocks(self) -> None:
        out = self.out('fig6')
        self.assertEqual(self.run_main(['simulate', '--config', 'fig6', '--out', out]), 0)
        for i, n in zip([1, 2, 3], [1, 3, 2]):
            header = self.header(os.path.join(out, f'trajectory_block_{i}.csv'))
            self.assertEqual(header, ['time'] + [f'x_{i}_{k}' for k in range(n + 1)])
        self.assertEqual(self.header(os.path.join(out, 'events.csv')), ['event_index', 'time', 'height_1', 'height_2', 'height_3'])

    def test_oracle_compare(self) -> None:
        path = self.write_config(SMALL_CONFIG)
        out = self.out('oracle')
        self.assertEqual(self.run_main(['oracle-compare', '--config', path, '--out', out]), 0)
        table = np.loadtxt(os.path.join(out, 'oracle.csv'), delimiter = ',', skiprows = 1)
        self.assertEqual(table.shape, (3, 4))
        self.assertTrue(np.all(table[:, 3] == 1))
        self.assertTrue(np.all(table[:, 1] == table[:, 2]))

    def test_validate_moments(self) -> None:
        out = self.out('moments')
        status = self.run_main(['validate-moments', '--config', 'fig5', '--out', out, '--reps', '50'])
        self.assertIn(status, [0, 1])
        self.assertEqual(self.header(os.path.join(out, 'moments.csv')), ['t', 'mean', 'stderr', 'theory', 'z'])
        table = np.loadtxt(os.path.join(out, 'moments.csv'), delimiter = ',', skiprows = 1)
        self.assertTrue(np.allclose(table[:, 3], 5*(1 - np.exp(-0.2*table[:, 0]))))
        self.assertEqual(table[0, 1], 0.0)
        self.assertEqual(self.read_report(out)['replications'], '50')

    def test_couple(self) -> None:
        out = self.out('couple')
        self.assertEqual(self.run_main(['couple', '--config', 'contraction', '--out', out, '--reps', '100']), 0)
        for name in ['coupled_path.csv', 'events_x.csv', 'events_y.csv', 'contraction.csv']:
            self.assertTrue(os.path.isfile(os.path.join(out, name)), msg = name)
        self.assertEqual(self.header(os.path.join(out, 'coupled_path.csv')), ['time', 'H', 'sum_x', 'sum_y'])
        report = self.read_report(out)
        self.assertAlmostEqual(float(report['d']), 0.5, places = 12)
        self.assertAlmostEqual(float(report['kappa_contr']), 1.0, places = 12)

        # a kernel that is not subcritical for the rate has no certificate
        path = self.write_config(SWEEP_CONFIG.split('[sweep]')[0].replace('c = [1.0]', 'c = [6.0]') + '\n[couple]\ny0 = [1.0, 1.0]\n')
        out = self.out('no_certificate')
        self.assertEqual(self.run_main(['couple', '--config', path, '--out', out]), 1)
        self.assertEqual(self.read_report(out)['certificate'], 'none')

        # weights whose contraction rate is negative
        path = self.write_config(SWEEP_CONFIG.split('[sweep]')[0].replace('scale = 5.0', 'scale = 2.0') + '\n[couple]\ny0 = [1.0, 1.0]\nb = [0.0, 1.0, 10.0]\n')
        out = self.out('no_contraction')
        self.assertEqual(self.run_main(['couple', '--config', path, '--out', out]), 1)
        report = self.read_report(out)
        self.assertEqual(report['certificate'], 'none')
        self.assertIn('d = -4', report['reason'])

    def test_infeasible_drift(self) -> None:
        path = self.write_config(SWEEP_CONFIG.split('[sweep]')[0].replace('c = [1.0]', 'c = [6.0]'))
        for subcommand in ['drift-check', 'return-time']:
            out = self.out(subcommand)
            self.assertEqual(self.run_main([subcommand, '--config', path, '--out', out]), 1, msg = subcommand)
            report = self.read_report(out)
            self.assertEqual(report['certificate'], 'none', msg = subcommand)
            self.assertEqual(report['passed'], 'False', msg = subcommand)
            self.assertIn('>= alpha', report['reason'])
            self.assertTrue(os.path.isfile(os.path.join(out, 'manifest.txt')))

    def test_stability_subcommands(self) -> None:
        out = self.out('drift')
        self.assertEqual(self.run_main(['drift-check', '--config', 'drift', '--out', out]), 0)
        self.assertEqual(self.read_report(out)['failures'], '0')

        out = self.out('minorization')
        self.assertEqual(self.run_main(['minorization-check', '--config', 'minorization', '--out', out]), 0)
        self.assertEqual(self.header(os.path.join(out, 'jacobian.csv')), ['probe_index', 'det', 'max_rel_error'])
        self.assertEqual(self.read_report(out)['density_certified'], 'True')

        out = self.out('return_time')
        self.assertEqual(self.run_main(['return-time', '--config', 'return_time', '--out', out, '--reps', '20']), 0)
        table = np.loadtxt(os.path.join(out, 'return_times.csv'), delimiter = ',', skiprows = 1)
        self.assertEqual(table.shape, (20, 2))
        self.assertEqual(self.read_report(out)['censored'], '0')

    def test_sweep(self) -> None:
        path = self.write_config(SWEEP_CONFIG)
        out = self.out('sweep')
        self.assertEqual(self.run_main(['sweep', '--config', path, '--out', out]), 0)
        report = self.read_report(out)
        for j, alpha in enumerate([0.8, 1.0, 1.4]):
            point = os.path.join(out, f'point_{j:03d}')
            self.assertTrue(os.path.isfile(os.path.join(point, 'trajectory.csv')))
            self.assertEqual(self.read_report(point)['subcommand'], 'simulate')
            self.assertEqual(report[f'point_{j:03d}'], f'kernel.alpha=[{alpha}]')
