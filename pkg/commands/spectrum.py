"""
spectrum: entanglement spectrum density D(lambda) and its moments.
"""

import numpy as np
import pandas as pd

from commands.common import add_common_arguments, execute, model_parameters, resolve_format
from services.entropy_observables import spectrum_density, spectrum_moment, spectrum_moment_closed_form
from utils.output_utils import get_param, write_result

NAME = 'spectrum'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='entanglement spectrum density and moment checks')
    add_common_arguments(parser)
    parser.add_argument('--points', type=int, help='interior grid points on the support (default 200)')
    parser.add_argument('--max-moment', dest='max_moment', type=int, help='largest moment order (default 5)')
    parser.set_defaults(handler=run)


def _body(args, file_values, out_dir, manifest):
    params, _ = model_parameters(args, file_values)
    points = int(get_param('points', args, file_values, 200))
    max_moment = int(get_param('max_moment', args, file_values, 5))

    density = spectrum_density(params.N)
    low, high = density.support
    # interior midpoints avoid the endpoint singularity at lambda = 0
    lambdas = low + (high - low) * (np.arange(points) + 0.5) / points
    table = pd.DataFrame({'lambda': lambdas, 'density': density.density(lambdas)})
    moments = pd.DataFrame({
        'k': np.arange(max_moment + 1, dtype=np.int64),
        'quadrature': [spectrum_moment(params.N, k) for k in range(max_moment + 1)],
        'closed_form': [spectrum_moment_closed_form(params.N, k) for k in range(max_moment + 1)],
    })
    manifest.parameters = {'N': params.N, 'points': points, 'max_moment': max_moment}
    fmt = resolve_format(args, file_values)
    return write_result(table, out_dir, 'spectrum', fmt) + write_result(moments, out_dir, 'spectrum_moments', fmt)


def run(args):
    return execute(args, NAME, _body)
