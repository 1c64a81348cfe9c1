"""
quasi-entropy: S^{(n)} over theta for several Renyi orders.
"""

import numpy as np
import pandas as pd

from commands.common import add_common_arguments, execute, model_parameters, resolve_format
from services.entropy_observables import quasi_entropy
from utils.output_utils import get_param, write_json, write_result

NAME = 'quasi-entropy'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='quasi entropy tables from the maximal saddles')
    add_common_arguments(parser)
    parser.add_argument('--orders', help='comma-separated Renyi orders (default 2,3,4)')
    parser.add_argument('--points', type=int, help='theta grid points including both ends (default 21)')
    parser.add_argument('--theta', type=float, help='single angle; also writes the saddle decomposition')
    parser.set_defaults(handler=run)


def _body(args, file_values, out_dir, manifest):
    params, _ = model_parameters(args, file_values)
    raw_orders = get_param('orders', args, file_values, '2,3,4')
    orders = [int(float(o)) for o in str(raw_orders).split(',') if o.strip()]
    theta = get_param('theta', args, file_values)
    if theta is not None:
        thetas = [float(theta)]
    else:
        thetas = list(np.linspace(0.0, np.pi / 2, int(get_param('points', args, file_values, 21))))

    rows = []
    decompositions = {}
    for n in orders:
        for value in thetas:
            result = quasi_entropy(n, value, params.N, params.L)
            rows.append({
                'order': n,
                'theta': value,
                'value': result.value,
                'extensive': result.extensive,
                'subleading': result.subleading,
                'cyclic_only': result.variants['cyclic_only'],
            })
            if theta is not None:
                decompositions[str(n)] = result.to_dict()
    table = pd.DataFrame(rows, columns=['order', 'theta', 'value', 'extensive', 'subleading', 'cyclic_only'])
    manifest.parameters = {'orders': orders, 'thetas': thetas, 'N': params.N, 'L': params.L}

    outputs = write_result(table, out_dir, 'quasi_entropy', resolve_format(args, file_values))
    if decompositions:
        outputs.append(write_json(decompositions, out_dir / 'quasi_entropy_saddles.json'))
    return outputs


def run(args):
    return execute(args, NAME, _body)
