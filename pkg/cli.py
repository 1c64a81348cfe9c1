"""
Command-line entry point for the monitored Brownian SYK replica toolkit.
Writes plot-ready tables and a run manifest for every subcommand.
"""

import argparse
import logging
import sys

import config
from commands import COMMANDS
from commands.common import EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='syk-replica',
        description='Replica saddles, entropies and trajectories of monitored Brownian SYK chains',
    )
    parser.add_argument('--verbose', '-v', action='store_true', help='debug logging')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True

    # Register subcommands
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors and 0 after --help
        return EXIT_USAGE if exc.code not in (0, None) else 0

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else getattr(logging, config.LOG_LEVEL, logging.INFO),
        format=config.LOG_FORMAT,
    )
    return args.handler(args)


if __name__ == '__main__':
    sys.exit(main())
