"""
Subcommands of the command line. Each module exposes register(subparsers) and run(args).
"""

from commands import entropy_curve, phase_diagram, quasi_entropy, saddle_ode, simulate, spectrum, verify

COMMANDS = (phase_diagram, entropy_curve, spectrum, saddle_ode, quasi_entropy, simulate, verify)
