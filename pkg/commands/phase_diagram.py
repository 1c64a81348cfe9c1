"""
phase-diagram: Lambda(mu) roots on a mu grid and the transition class.
"""

import numpy as np

from commands.common import add_common_arguments, execute, model_parameters, resolve_format
from services.phase_solver import classify_transition, scan_phase_diagram
from utils.output_utils import get_param, parse_float_list, write_json, write_result

NAME = 'phase-diagram'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='scan the saddle amplitude Lambda over mu')
    add_common_arguments(parser)
    parser.add_argument('--mus', help='comma-separated mu values (overrides --mu-max/--points)')
    parser.add_argument('--mu-max', dest='mu_max', type=float, help='largest mu of the grid (default 1.5 J)')
    parser.add_argument('--points', type=int, help='number of grid points (default 301)')
    parser.set_defaults(handler=run)


def _body(args, file_values, out_dir, manifest):
    params, _ = model_parameters(args, file_values)
    mus = parse_float_list(get_param('mus', args, file_values))
    if not mus:
        mu_max = float(get_param('mu_max', args, file_values, 1.5 * params.J))
        points = int(get_param('points', args, file_values, 301))
        mus = list(np.linspace(0.0, mu_max, points))

    table = scan_phase_diagram(params.J, params.U, params.q, mus)
    transition = classify_transition(params.J, params.U, params.q)
    manifest.parameters = {**params.to_dict(), 'mus': [float(mu) for mu in mus]}
    outputs = write_result(table, out_dir, 'phase_diagram', resolve_format(args, file_values))
    outputs.append(write_json({
        'kind': transition.kind,
        'mu_c': transition.mu_c,
        'window': list(transition.window) if transition.window else None,
        'tricritical_U': transition.tricritical_U,
    }, out_dir / 'transition.json'))
    return outputs


def run(args):
    return execute(args, NAME, _body)
