"""
Shared flag definitions and the run wrapper every subcommand goes through.
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import config
from services.model_core import PARAM_KEYS, REPLICA_KEYS, ModelParams, ReplicaConfig, params_from_mapping
from utils.exceptions import ConfigFileError, VerificationFailure
from utils.output_utils import RunManifest, get_param, load_config_file

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2

OUTPUT_FORMATS = ('csv', 'arrow', 'parquet')

# (flag type) of every ModelParams / ReplicaConfig field
_MODEL_FLAGS = {'J': float, 'U': float, 'q': int, 'mu': float, 'N': int, 'L': int, 'n': float, 'T': float}

Body = Callable[[argparse.Namespace, Dict[str, Any], Path, RunManifest], List[Path]]


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', help='JSON file with parameters (flags take precedence)')
    parser.add_argument('--out', help=f'output directory (default {config.DEFAULT_OUTPUT_DIR})')
    parser.add_argument('--seed', type=int, help=f'random seed (default {config.DEFAULT_SEED})')
    parser.add_argument('--format', dest='output_format', choices=OUTPUT_FORMATS,
                        help=f'extra table format next to CSV (default {config.OUTPUT_FORMAT})')
    for name, kind in _MODEL_FLAGS.items():
        parser.add_argument(f'--{name}', type=kind, dest=name, help=f'model parameter {name}')


def model_parameters(
    args: argparse.Namespace, file_values: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None
) -> Tuple[ModelParams, ReplicaConfig]:
    """Flags over config file over per-command defaults over ModelParams defaults."""
    mapping = dict(overrides or {})
    for key in PARAM_KEYS + REPLICA_KEYS:
        value = get_param(key, args, file_values)
        if value is not None:
            mapping[key] = value
    return params_from_mapping(mapping)


def resolve_seed(args: argparse.Namespace, file_values: Dict[str, Any]) -> int:
    return int(get_param('seed', args, file_values, config.DEFAULT_SEED))


def resolve_format(args: argparse.Namespace, file_values: Dict[str, Any]) -> str:
    fmt = getattr(args, 'output_format', None) or file_values.get('format') or config.OUTPUT_FORMAT
    if fmt not in OUTPUT_FORMATS:
        raise ConfigFileError(f"Unknown output format: {fmt}")
    return fmt


def execute(args: argparse.Namespace, command: str, body: Body) -> int:
    """
    Run one subcommand inside a manifest.

    The manifest is written in every case; InvalidParameter-style errors map
    to exit code 2, failed verification to 1.
    """
    out_dir = Path(args.out or config.DEFAULT_OUTPUT_DIR)
    manifest = RunManifest(command=command)
    status = 'error'
    code = EXIT_USAGE
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        file_values = load_config_file(args.config)
        outputs = body(args, file_values, out_dir, manifest)
        manifest.add_outputs(outputs)
        status, code = 'ok', EXIT_OK
        print(f"✅ {command}: wrote {len(outputs)} file(s) to {out_dir}")
    except VerificationFailure as exc:
        status, code = 'verification-failed', EXIT_VERIFICATION
        print(f"❌ {command}: {exc}")
    except ValueError as exc:
        # InvalidParameter, SizeCapExceeded, ConfigFileError, ... all derive from ValueError
        field = getattr(exc, 'field', None)
        print(f"❌ {command}: {exc}" + (f" (field: {field})" if field else ''))
        LOGGER.debug("Usage error in %s", command, exc_info=True)
    finally:
        manifest.finish(status)
        try:
            manifest.write(out_dir)
        except OSError as exc:
            LOGGER.error("Could not write manifest to %s: %s", out_dir, exc)
    return code
