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
Subcommand dispatch of the command line interface. `do_analysis` turns a validated configuration into an `AnalysisResult` (tables, report entries and a pass/fail flag) for one of the subcommands in SUBCOMMANDS.
"""

import itertools
import os

import numpy as np

from .. import __version__
from ..simulation.coupling import coupled_path, contraction_constants, estimate_contraction, simulate_coupled
from ..simulation.misc import AnalysisResult, emit_report
from ..simulation.simulator import batch_moments, history_input, closed_form_mean, reconstruct_trajectory, simulate_direct, simulate_model
from ..stability.lyapunov import estimate_return_time, lyapunov_v, verify_drift
from ..stability.minorization import (
    MinorizationProbe,
    finite_difference_jacobian,
    gamma_jacobian,
    gamma_map,
    jacobian_columns,
    jump_time_density,
    make_probe,
    minorization_probe_general,
    probe_neighborhood,
)
from .cascade import CascadeState
from .config import ExperimentConfig
from .errors import ConfigError, InfeasibleError, NoContractionError, QuadratureError
from .kernels import check_stability, choose_b
from .streams import STREAM_STATES, make_stream

__all__ = [
    'SUBCOMMANDS',
    'do_analysis',
]

SUBCOMMANDS = ['simulate', 'oracle-compare', 'validate-moments', 'couple', 'drift-check', 'return-time', 'minorization-check', 'sweep']

# tolerances of the built-in assertions
INTENSITY_RTOL = 1e-9
JACOBIAN_RTOL = 1e-6
MIN_PROBE_GAP = 1e-3
REPEATED_DET_TOL = 1e-12


def _grid(config: ExperimentConfig) -> np.ndarray:
    T, step = float(config.get('general', 'T')), float(config.get('general', 'trajectory_step'))
    grid = np.arange(0.0, T, step)
    return np.append(grid, T)

def _t_grid(config: ExperimentConfig, section: str) -> np.ndarray:
    t_grid = config.get(section, 't_grid')
    if t_grid is None:
        return np.linspace(0.0, float(config.get('general', 'T')), 7)
    t_grid = np.asarray(t_grid, dtype = float)
    if t_grid.ndim != 1 or np.any(np.diff(t_grid) < 0) or np.any(t_grid < 0):
        raise ConfigError(f'{section}.t_grid', 'Expected a sorted list of non-negative times.')
    return t_grid

def _stability_report(config: ExperimentConfig) -> dict:
    model = config.model()
    verdict = check_stability(model.kernel, model.rate, model.heights)
    return {
        'l1_norm': verdict.l1_norm,
        'subcritical': verdict.subcritical_eq3,
        'subcritical_margin': verdict.eq3_margin,
        'weighted_height_condition': verdict.condition_ass1,
        'weighted_height_margin': verdict.ass1_margin,
        'stability_notes': verdict.notes,
    }

def _no_certificate(subcommand: str, err: Exception, verbose: bool) -> AnalysisResult:
    if verbose:
        print(f'No certificate for {subcommand}: {err}')
    return AnalysisResult(subcommand, passed = False, report = {'certificate': 'none', 'reason': str(err)})

def _simulate(config: ExperimentConfig, verbose: bool) -> AnalysisResult:
    model = config.model()
    seed, T, mode = config.get('general', 'seed'), float(config.get('general', 'T')), config.get('general', 'mode')

    log = simulate_model(model, T, seed, mode = mode)
    trajectory = reconstruct_trajectory(log, _grid(config))

    result = AnalysisResult('simulate')
    result.tables['events.csv'] = log.to_table()
    result.tables['trajectory.csv'] = trajectory.to_table()
    if model.kernel.L > 1:
        for i in range(model.kernel.L):
            result.tables[f'trajectory_block_{i+1}.csv'] = trajectory.to_table(block = i)

    result.report.update({'events': log.count, 'proposals': log.proposal_count, 'acceptance_rate': log.count / max(log.proposal_count, 1)})
    result.report.update(_stability_report(config))

    if verbose:
        print(f'{log.count} events from {log.proposal_count} proposals on [0, {T}].')

    return result

def _oracle_compare(config: ExperimentConfig, verbose: bool) -> AnalysisResult:
    model = config.model()
    k, f = model.kernel, model.rate
    seed, T, mode = config.get('general', 'seed'), float(config.get('general', 'T')), config.get('general', 'mode')
    runs = int(config.get('oracle', 'runs'))

    rows, identical = [], True
    first_log = None
    for r in range(runs):
        cascade = simulate_model(model, T, seed, r, mode)
        direct = simulate_direct(k, f, model.heights, model.x0, T, seed, r, mode)
        same = cascade.identical(direct)
        identical &= same
        rows.append([r, cascade.count, direct.count, float(same)])
        first_log = cascade if first_log is None else first_log

    # intensity by history against intensity by replayed cascade on a frozen history
    grid = np.linspace(0.0, T, int(config.get('oracle', 'grid_points')) + 2)[1:-1]
    replay = reconstruct_trajectory(first_log, grid)
    by_cascade = replay.states[:, k.first_indices].sum(axis = 1)
    by_history = np.array([history_input(k, model.x0, first_log.times, first_log.heights, t) for t in grid])
    at_events = np.isin(grid, first_log.times)
    diff = np.abs(by_cascade - by_history)[~at_events] / np.maximum(1.0, np.abs(by_history[~at_events]))
    max_rel = float(diff.max()) if diff.size else 0.0

    result = AnalysisResult('oracle-compare', passed = bool(identical and max_rel <= INTENSITY_RTOL))
    result.tables['oracle.csv'] = (np.array(rows), ['replication', 'events_cascade', 'events_direct', 'identical'])
    result.report.update({'runs': runs, 'identical_logs': identical, 'intensity_max_rel_diff': max_rel})

    if verbose:
        print(f'{sum(int(row[3]) for row in rows)}/{runs} event logs identical, intensity max relative difference {max_rel:.3g}.')

    return result

def _validate_moments(config: ExperimentConfig, verbose: bool) -> AnalysisResult:
    model = config.model()
    k, f = model.kernel, model.rate
    if k.L != 1 or k.c[0] != 1 or f.family != 'linear-positive-part' or not model.heights.is_constant or model.heights.values[0] != 1:
        raise ConfigError('moments', "The closed-form mean needs L=1, c=1, constant heights and the 'linear-positive-part' family.")
    if np.any(model.x0.coords < 0):
        raise ConfigError('initial.x0', 'The closed-form mean needs a non-negative initial state.')

    t_grid = _t_grid(config, 'moments')
    reps = int(config.get('general', 'replications'))
    table = batch_moments(model, reps, t_grid, config.get('general', 'seed'), config.get('general', 'mode'), verbose)

    theory = closed_form_mean(t_grid, float(k.alpha[0]), f.param_dict()['mu'], model.x0.total())
    stderr = table[:, 2]
    gap = table[:, 1] - theory
    z = np.divide(gap, stderr, out = np.where(gap == 0, 0.0, np.inf), where = stderr > 0)
    tolerance = float(config.get('moments', 'tolerance'))

    result = AnalysisResult('validate-moments', passed = bool(np.all(np.abs(z) <= tolerance)))
    result.tables['moments.csv'] = (np.column_stack([table, theory, z]), ['t', 'mean', 'stderr', 'theory', 'z'])
    result.report.update({'replications': reps, 'max_abs_z': float(np.max(np.abs(z))), 'tolerance': tolerance})

    if verbose:
        print(f'Largest |z| = {np.max(np.abs(z)):.3f} over {t_grid.size} times ({reps} replications).')

    return result

def _couple(config: ExperimentConfig, verbose: bool) -> AnalysisResult:
    model = config.model()
    k, f = model.kernel, model.rate
    seed, T, mode = config.get('general', 'seed'), float(config.get('general', 'T')), config.get('general', 'mode')
    y0 = config.state('couple', 'y0', k)

    b = config.get('couple', 'b')
    try:
        b = choose_b(k, f, model.heights).b if b == 'auto' else b
        constants = contraction_constants(k, f, model.heights, b)
    except (InfeasibleError, NoContractionError, QuadratureError) as err:
        return _no_certificate('couple', err, verbose)
    except ValueError as err:
        raise ConfigError('couple.b', str(err)) from err

    run = simulate_coupled(k, f, model.heights, model.x0, y0, T, seed, mode = mode)
    path = coupled_path(run, _grid(config), b)

    t_grid = _t_grid(config, 'couple')
    reps = int(config.get('general', 'replications'))
    table = estimate_contraction(model, y0, reps, t_grid, seed, b, mode, verbose)
    envelope = path[0, 1] * np.exp(-constants.d * t_grid)
    tolerance = float(config.get('couple', 'tolerance'))
    within = table[:, 1] - tolerance * table[:, 2] <= envelope * (1 + 1e-12)

    result = AnalysisResult('couple', passed = bool(np.all(within)))
    result.tables['coupled_path.csv'] = (path, ['time', 'H', 'sum_x', 'sum_y'])
    result.tables['events_x.csv'] = run.x_log.to_table()
    result.tables['events_y.csv'] = run.y_log.to_table()
    result.tables['contraction.csv'] = (np.column_stack([table, envelope]), ['t', 'mean_H', 'stderr', 'envelope'])
    result.report.update({
        'kappa_contr': constants.kappa_contr,
        'd': constants.d,
        'b': list(constants.b),
        'joint_jumps': run.joint,
        'solo_jumps_x': run.solo_x,
        'solo_jumps_y': run.solo_y,
        'replications': reps,
    })

    if verbose:
        print(f'd = {constants.d:.6g}, kappa = {constants.kappa_contr:.6g}; envelope respected at {int(within.sum())}/{within.size} times.')

    return result

def _drift_check(config: ExperimentConfig, verbose: bool) -> AnalysisResult:
    model = config.model()
    k, f = model.kernel, model.rate
    samples = int(config.get('drift', 'samples'))
    seed = config.get('general', 'seed')
    try:
        spec = choose_b(k, f, model.heights, samples = samples)
    except (InfeasibleError, QuadratureError) as err:
        return _no_certificate('drift-check', err, verbose)

    rng = make_stream(seed, 0, STREAM_STATES)
    scale = float(config.get('drift', 'scale'))
    rows = []
    for j in range(int(config.get('drift', 'states'))):
        x = CascadeState(k, scale * 10**rng.uniform(-2, 2) * rng.standard_normal(k.kappa))
        check = verify_drift(x, k, f, model.heights, spec, samples = samples)
        rows.append([j, lyapunov_v(x, spec), check.LV, check.bound, float(check.in_K), float(check.passed)])

    rows = np.array(rows).reshape(-1, 6)
    passed = bool(np.all(rows[:, 5] == 1))

    result = AnalysisResult('drift-check', passed = passed)
    result.tables['drift.csv'] = (rows, ['state_index', 'V', 'LV', 'bound', 'in_K', 'passed'])
    result.report.update({
        'b': list(spec.b), 'lambda': spec.lam, 'beta': spec.beta, 'R': spec.R,
        'states': rows.shape[0], 'failures': int(np.sum(rows[:, 5] == 0)), 'states_in_K': int(rows[:, 4].sum()),
    })

    if verbose:
        print(f'Drift condition holds at {int(rows[:, 5].sum())}/{rows.shape[0]} states (lambda = {spec.lam:.4g}, R = {spec.R:.4g}).')

    return result

def _return_time(config: ExperimentConfig, verbose: bool) -> AnalysisResult:
    model = config.model()
    try:
        spec = choose_b(model.kernel, model.rate, model.heights)
    except (InfeasibleError, QuadratureError) as err:
        return _no_certificate('return-time', err, verbose)
    eta = config.get('return_time', 'eta')
    eta = spec.lam if eta == 'auto' else float(eta)

    estimate = estimate_return_time(model, spec, eta, int(config.get('general', 'replications')), config.get('general', 'seed'), float(config.get('return_time', 'time_cap')), config.get('general', 'mode'), verbose)

    result = AnalysisResult('return-time', passed = estimate.passed)
    result.tables['return_times.csv'] = (np.column_stack([np.arange(estimate.hitting_times.size), estimate.hitting_times]), ['replication', 'T_K'])
    result.report.update({'eta': estimate.eta, 'estimate': estimate.estimate, 'stderr': estimate.stderr, 'V_x0': estimate.v0, 'censored': estimate.censored, 'R': spec.R})

    return result

def _random_probe(k, heights, T, x_star, target, rng) -> MinorizationProbe:
    m = int(k.n[target]) + 1
    s = np.sort(rng.uniform(0.0, T, m))[::-1]
    c = np.array([[rng.uniform(*law.support_interval()) for law in heights.component_laws()] for _ in range(m)])
    return MinorizationProbe(x_star, c, s, T)

def _minorization_check(config: ExperimentConfig, verbose: bool) -> AnalysisResult:
    model = config.model()
    k, f = model.kernel, model.rate
    T = config.get('minorization', 'T')
    T = float(config.get('general', 'T')) if T is None else float(T)
    target = int(config.get('minorization', 'target'))
    x_star = config.state('minorization', 'x_star', k)
    try:
        probe = make_probe(k, model.heights, T, x_star, target)
    except ValueError as err:
        raise ConfigError('minorization', str(err)) from err

    rng = make_stream(config.get('general', 'seed'), 0, STREAM_STATES)
    result = AnalysisResult('minorization-check')
    rows = []

    if k.L == 1:
        for j in range(int(config.get('minorization', 'probes'))):
            candidate = _random_probe(k, model.heights, T, x_star, 0, rng)
            # finite differences need room around every jump time
            gaps = -np.diff(np.concatenate([[T], candidate.s, [0.0]]))
            if gaps.min() < MIN_PROBE_GAP or np.any(candidate.c_star == 0):
                continue
            J, det = gamma_jacobian(candidate)
            J_fd = finite_difference_jacobian(lambda s: gamma_map(candidate.with_s(s)), candidate.s)
            rel = float(np.max(np.abs(J_fd - J)) / max(np.max(np.abs(J)), np.finfo(float).tiny))
            rows.append([j, det, rel])
        rows = np.array(rows).reshape(-1, 3)

        _, det = gamma_jacobian(probe)
        # merging all jump times must make the Jacobian singular
        det_repeated = abs(float(np.linalg.det(jacobian_columns(k, probe.c_star, np.full(probe.m, probe.s[0]), 0)))) if probe.m > 1 else 0.0
        max_rel = float(rows[:, 2].max()) if rows.size else 0.0

        result.passed = bool(det != 0 and max_rel <= JACOBIAN_RTOL and det_repeated <= REPEATED_DET_TOL)
        result.tables['jacobian.csv'] = (rows, ['probe_index', 'det', 'max_rel_error'])
        result.report.update({'det_at_probe': det, 'det_repeated_times': det_repeated, 'jacobian_max_rel_error': max_rel})
    else:
        report = minorization_probe_general(probe, target)
        result.passed = report.invertible
        result.report.update({
            'target_block': target + 1, 'prefactor': report.prefactor, 'det_B': report.det_B,
            'det_product': report.det_product, 'det_analytic': report.det_analytic, 'det_numeric': report.det_numeric,
            'lower_left_max': report.lower_left_max, 'relative_error': report.relative_error,
        })

    density = jump_time_density(probe, f)
    neighborhood = probe_neighborhood(probe, f, float(config.get('minorization', 'radius')), int(config.get('minorization', 'samples')), config.get('general', 'seed'), block = target)
    if f.lower_bound > 0:
        result.passed = result.passed and density > 0 and neighborhood.density_certified
    result.report.update({
        'density_at_probe': density,
        'density_certified': neighborhood.density_certified,
        'neighborhood_radius': neighborhood.radius,
        'neighborhood_admissible': neighborhood.admissible,
        'neighborhood_min_density': neighborhood.min_density,
        'neighborhood_min_abs_det': neighborhood.min_abs_det,
    })

    if verbose:
        print(f"Minorization probe {'passed' if result.passed else 'failed'} (density at probe {density:.4g}).")

    return result

def _sweep(config: ExperimentConfig, output_dir: str, verbose: bool) -> AnalysisResult:
    grid = config.get('sweep', 'grid')
    subcommand = config.get('sweep', 'subcommand')
    if not isinstance(grid, dict) or not grid:
        raise ConfigError('sweep.grid', "Expected a dict such as {'kernel.alpha': [[0.8], [1.0], [1.4]]}.")
    if subcommand not in SUBCOMMANDS or subcommand == 'sweep':
        raise ConfigError('sweep.subcommand', f"Expected one of: {', '.join(s for s in SUBCOMMANDS if s != 'sweep')}.")

    keys = list(grid)
    base = dict(config.values)
    base.pop('sweep')
    base = ExperimentConfig(base)

    result = AnalysisResult('sweep')
    for j, point in enumerate(itertools.product(*(grid[key] for key in keys))):
        overrides = dict(zip(keys, point))
        point_config = base.with_overrides(overrides)
        point_dir = os.path.join(output_dir, f'point_{j:03d}')
        point_result = do_analysis(point_config, subcommand, point_dir, verbose = False)
        emit_report(point_result, point_dir, point_config.to_ini(), point_config.get('general', 'seed'), __version__, verbose = False)
        result.passed = result.passed and point_result.passed
        result.report[f'point_{j:03d}'] = ', '.join(f'{key}={value!r}' for key, value in overrides.items())
        if verbose:
            print(f"point_{j:03d}: {result.report[f'point_{j:03d}']} ({'passed' if point_result.passed else 'FAILED'})")

    return result

def do_analysis(config: ExperimentConfig, subcommand: str, output_dir: str, verbose: bool = True) -> AnalysisResult:
    r"""
    Run one subcommand on a validated configuration.

    Parameters
    ----------
    * config: ExperimentConfig
        * The parsed configuration
    * subcommand: str
        * One of SUBCOMMANDS
    * output_dir: str
        * Directory for outputs (only written to directly by 'sweep', which emits one sub-directory per grid point)
    * verbose: bool, optional
        * True (default) to print progress and results

    Returns
    -------
    * result: AnalysisResult

    """
    if subcommand == 'simulate':
        return _simulate(config, verbose)
    elif subcommand == 'oracle-compare':
        return _oracle_compare(config, verbose)
    elif subcommand == 'validate-moments':
        return _validate_moments(config, verbose)
    elif subcommand == 'couple':
        return _couple(config, verbose)
    elif subcommand == 'drift-check':
        return _drift_check(config, verbose)
    elif subcommand == 'return-time':
        return _return_time(config, verbose)
    elif subcommand == 'minorization-check':
        return _minorization_check(config, verbose)
    elif subcommand == 'sweep':
        return _sweep(config, output_dir, verbose)

    raise ValueError(f"The subcommand '{subcommand}' is not recognized. Available options are: {', '.join(SUBCOMMANDS)}.")
