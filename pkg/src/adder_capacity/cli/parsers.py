"""Argument parser creation for CLI commands."""

import argparse

from ..config import (
    VERSION, Estimator, Mode, OutputFormat, VerifySuite,
    GRID_GAMMA_MIN, GRID_GAMMA_MAX, GRID_GAMMA_STEP,
)
from ..curves import FIGURE_CURVES

DEFAULT_SAMPLES = 1000000
DEFAULT_SEED = 0


def create_common_parser() -> argparse.ArgumentParser:
    """Options shared by every subcommand."""
    parser = argparse.ArgumentParser(add_help=False)

    parser.add_argument(
        '--format', '-f',
        choices=[f.value for f in OutputFormat],
        default=None,
        help='Output format (default: csv for curves, table for verify, json otherwise)'
    )

    parser.add_argument(
        '--out', '-o',
        help='Output file path (optional, default: stdout)'
    )

    parser.add_argument(
        '--debug', '-d',
        action='store_true',
        help='Log debug messages to console'
    )

    parser.add_argument(
        '--config',
        help='YAML file overriding numeric defaults (series tolerance, enumeration cap, ...)'
    )

    return parser


def add_grid_arguments(parser: argparse.ArgumentParser) -> None:
    """Add the gamma grid flags used by bounds and figure."""
    parser.add_argument(
        '--gamma-min',
        type=float,
        default=GRID_GAMMA_MIN,
        help=f'Smallest load on the grid (default: {GRID_GAMMA_MIN})'
    )
    parser.add_argument(
        '--gamma-max',
        type=float,
        default=GRID_GAMMA_MAX,
        help=f'Largest load on the grid (default: {GRID_GAMMA_MAX})'
    )
    parser.add_argument(
        '--gamma-step',
        type=float,
        default=GRID_GAMMA_STEP,
        help=f'Grid spacing (default: {GRID_GAMMA_STEP})'
    )


def add_instance_arguments(parser: argparse.ArgumentParser) -> None:
    """Add --Q, --S and --dist."""
    parser.add_argument('--Q', type=int, required=True, help='Number of frequencies (subchannels)')
    parser.add_argument('--S', type=int, required=True, help='Number of users')
    parser.add_argument(
        '--dist',
        default='uniform',
        help="Common input distribution: 'uniform', 'distorted', or a file with one probability per line"
    )


def create_parser() -> argparse.ArgumentParser:
    """Create the top-level parser with all subcommands."""
    common = create_common_parser()

    main_parser = argparse.ArgumentParser(
        prog='adder-capacity',
        description='Capacity bounds of the Q-frequency S-user vector adder channel',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    main_parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION}')

    subparsers = main_parser.add_subparsers(dest='command', help='Available commands')

    bounds_parser = subparsers.add_parser(
        'bounds', parents=[common],
        help='Asymptotic bound curves of one transmission mode on a gamma grid'
    )
    bounds_parser.add_argument('mode', choices=[m.value for m in Mode], help='Transmission mode')
    add_grid_arguments(bounds_parser)

    finite_parser = subparsers.add_parser(
        'finite', parents=[common],
        help='Finite-Q bounds and uncoordinated sum rate for one (Q, S) instance'
    )
    add_instance_arguments(finite_parser)

    gamma_star_parser = subparsers.add_parser(
        'gamma-star', parents=[common],
        help='Load maximizing the uniform-input uncoordinated rate, and its value'
    )
    gamma_star_parser.add_argument(
        '--tol',
        type=float,
        default=None,
        help='Final golden-section bracket width (default: gamma_star.tol from --config, else 1e-8)'
    )

    simulate_parser = subparsers.add_parser(
        'simulate', parents=[common],
        help='Seeded Monte Carlo estimate of I(X;Y) or H(Y) with a standard error'
    )
    add_instance_arguments(simulate_parser)
    simulate_parser.add_argument(
        '--samples',
        type=int,
        default=DEFAULT_SAMPLES,
        help=f'Number of channel uses to sample (default: {DEFAULT_SAMPLES})'
    )
    simulate_parser.add_argument(
        '--seed',
        type=int,
        default=DEFAULT_SEED,
        help=f'64-bit seed (default: {DEFAULT_SEED})'
    )
    simulate_parser.add_argument(
        '--streams',
        type=int,
        default=1,
        help='Number of independent parallel streams (default: 1)'
    )
    simulate_parser.add_argument(
        '--quantity',
        choices=['mi', 'entropy'],
        default='mi',
        help='Estimate the single-user mutual information or the output entropy (default: mi)'
    )
    simulate_parser.add_argument(
        '--estimator',
        choices=[Estimator.plug_in.value, Estimator.miller_madow.value],
        default=Estimator.plug_in.value,
        help='Entropy estimator for --quantity entropy (default: plug-in)'
    )

    verify_parser = subparsers.add_parser(
        'verify', parents=[common],
        help='Run a verification suite; exits 1 if any case fails'
    )
    verify_parser.add_argument('suite', choices=[s.value for s in VerifySuite], help='Suite to run')

    figure_parser = subparsers.add_parser(
        'figure', parents=[common],
        help='Preset curve set 1, 2 or 3'
    )
    figure_parser.add_argument('figure_id', type=int, choices=sorted(FIGURE_CURVES), help='Figure number')
    add_grid_arguments(figure_parser)

    return main_parser
