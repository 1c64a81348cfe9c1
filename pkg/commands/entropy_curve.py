"""
entropy-curve: sigma(theta) on [0, pi/2], optionally with quasi-entropy columns.
"""

import numpy as np
import pandas as pd

from commands.common import add_common_arguments, execute, model_parameters, resolve_format
from services.entropy_observables import entropy_table, vn_entropy_density
from utils.output_utils import get_param, write_result

NAME = 'entropy-curve'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='von Neumann entropy density sigma(theta)')
    add_common_arguments(parser)
    parser.add_argument('--points', type=int, help='theta grid points including both ends (default 100)')
    parser.add_argument('--orders', help='comma-separated Renyi orders to add as S_n_k columns')
    parser.set_defaults(handler=run)


def _body(args, file_values, out_dir, manifest):
    params, _ = model_parameters(args, file_values)
    points = int(get_param('points', args, file_values, 100))
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    raw_orders = get_param('orders', args, file_values)
    orders = [int(float(o)) for o in str(raw_orders).split(',') if o.strip()] if raw_orders else []

    # linspace hits both ends exactly, so the first row is sigma(0) and the last sigma(pi/2)
    thetas = np.linspace(0.0, np.pi / 2, points)
    if orders:
        table = entropy_table(thetas, orders, params.N, params.L)
    else:
        table = pd.DataFrame({'theta': thetas, 'sigma': [vn_entropy_density(t) for t in thetas]})
    manifest.parameters = {'points': points, 'orders': orders, 'N': params.N, 'L': params.L}
    return write_result(table, out_dir, 'entropy_curve', resolve_format(args, file_values))


def run(args):
    return execute(args, NAME, _body)
