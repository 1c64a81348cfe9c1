"""
simulate: trajectory-averaged half-cut entropy for a sweep of measurement rates.
"""

import numpy as np
import pandas as pd

import config
from commands.common import add_common_arguments, execute, model_parameters, resolve_format, resolve_seed
from services.model_core import ModelParams
from services.trajectory_sim import INITIAL_STATES, SimConfig, estimate_entropy_curve, steady_state_mean
from utils.output_utils import get_param, parse_float_list, write_json, write_result

NAME = 'simulate'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='Monte Carlo of the monitored chains at desk scale')
    add_common_arguments(parser)
    parser.add_argument('--mus', help='comma-separated measurement rates (default: --mu)')
    parser.add_argument('--dt', type=float, help='time step (default 0.05)')
    parser.add_argument('--steps', type=int, help='number of steps (default 40)')
    parser.add_argument('--n-traj', dest='n_traj', type=int, help='trajectories per rate (default 20)')
    parser.add_argument('--initial-state', dest='initial_state', choices=INITIAL_STATES,
                        help='initial state (default epr)')
    parser.add_argument('--workers', type=int, help=f'worker processes (default {config.WORKERS})')
    parser.set_defaults(handler=run)


def _body(args, file_values, out_dir, manifest):
    params, _ = model_parameters(args, file_values, overrides={'N': 2, 'L': 2, 'U': 1.0})
    seed = resolve_seed(args, file_values)
    dt = float(get_param('dt', args, file_values, 0.05))
    steps = int(get_param('steps', args, file_values, 40))
    n_traj = int(get_param('n_traj', args, file_values, 20))
    initial = get_param('initial_state', args, file_values, 'epr')
    workers = int(get_param('workers', args, file_values, config.WORKERS))
    mus = parse_float_list(get_param('mus', args, file_values)) or [params.mu]

    frames = []
    steady = {}
    for mu in mus:
        swept = ModelParams(J=params.J, U=params.U, q=params.q, mu=mu, N=params.N, L=params.L)
        sim = SimConfig(params=swept, dt=dt, steps=steps, n_traj=n_traj, seed=seed, initial_state=initial)
        curve = estimate_entropy_curve(sim, workers=workers)
        frames.append(pd.DataFrame({
            'mu': np.full(len(curve.times), mu),
            't': curve.times,
            'mean_entropy': curve.mean,
            'stderr': curve.stderr,
        }))
        mean, error = steady_state_mean(curve)
        steady[repr(mu)] = {'mean': mean, 'stderr': error}

    manifest.seed = seed
    manifest.parameters = {
        **params.to_dict(), 'mus': mus, 'dt': dt, 'steps': steps, 'n_traj': n_traj, 'initial_state': initial,
    }
    table = pd.concat(frames, ignore_index=True)
    outputs = write_result(table, out_dir, 'simulate', resolve_format(args, file_values))
    outputs.append(write_json(steady, out_dir / 'steady_state.json'))
    return outputs


def run(args):
    return execute(args, NAME, _body)
