"""
saddle-ode: two-replica saddle trajectory, closed form and integrated.
"""

import numpy as np
import pandas as pd

from commands.common import add_common_arguments, execute, model_parameters, resolve_format
from services.saddle_dynamics import (
    elliptic_invariant,
    elliptic_solution,
    select_elliptic_branch,
    shift_t0,
    shoot_plateau,
)
from utils.output_utils import get_param, write_json, write_result

NAME = 'saddle-ode'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='closed-form and integrated saddle trajectories (n = 2)')
    add_common_arguments(parser)
    parser.add_argument('--c1', type=float, help='elliptic constant c1 (default 1)')
    parser.add_argument('--c2', type=float, help='elliptic constant c2 (default 1 - 1e-7)')
    parser.add_argument('--dt', type=float, help='integration step (default 1e-3)')
    parser.add_argument('--points', type=int, help='closed-form grid points (default 1001)')
    parser.set_defaults(handler=run)


def _body(args, file_values, out_dir, manifest):
    params, replicas = model_parameters(args, file_values, overrides={'J': 1.0, 'U': 0.4})
    J, U = params.J, params.U
    c1 = float(get_param('c1', args, file_values, 1.0))
    c2 = float(get_param('c2', args, file_values, 1.0 - 1e-7))
    dt = get_param('dt', args, file_values)
    points = int(get_param('points', args, file_values, 1001))
    horizon = replicas.T if replicas.T > 0 else 10.0

    t0 = shift_t0(J, U)
    times = np.linspace(0.0, horizon, points)
    branch, residuals = select_elliptic_branch(J, U, c1, c2, times[1:-1:max(1, points // 50)])
    closed = np.array([elliptic_solution(t, J, U, c1, c2, t0=t0, branch=branch) for t in times])
    closed_form = pd.DataFrame({'t': times, 'x1': closed[:, 0], 'x2': closed[:, 1], 'z1': closed[:, 2]})

    shot = shoot_plateau(J, U, dt=float(dt) if dt is not None else None)
    trajectory = shot.trajectory
    manifest.parameters = {'J': J, 'U': U, 'c1': c1, 'c2': c2, 'horizon': horizon, 'points': points}

    fmt = resolve_format(args, file_values)
    outputs = write_result(closed_form, out_dir, 'saddle_closed_form', fmt)
    outputs += write_result(trajectory.to_frame(), out_dir, 'saddle_ode', fmt)
    outputs.append(write_json({
        't0': t0,
        'elliptic_branch': branch,
        'branch_residuals': residuals,
        'elliptic_invariant': elliptic_invariant(J, U, c1, c2),
        'shooting_x1_0': shot.x1_0,
        'shooting_iterations': shot.iterations,
        'probe_time': shot.probe_time,
        'invariant_drift': trajectory.max_drift(),
        'closest_approach_time': shot.approach_time,
        'closest_approach_distance': shot.approach_distance,
    }, out_dir / 'saddle_summary.json'))
    return outputs


def run(args):
    return execute(args, NAME, _body)
