#!/usr/bin/env python
"""
Command-line front end of liouville-lab: runs one study of a scenario
configuration and writes its report and tables.
"""
import argparse
import logging
import os
import sys

from config import parse_config
from errors import LiouvilleError, SolverFailure
from scenario_orchestrator import ScenarioOrchestrator

SUBCOMMANDS = ("info", "solve", "sweep", "bubbles", "limit", "probe")
THREADS_VARIABLE = "LIOUVILLE_THREADS"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="liouville-lab",
        description="Numerical lab for the singular prescribed Gaussian and geodesic curvature problem",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Subcommands:
info     Euler characteristic, Trudinger constant, quantized set and hypotheses
solve    Minimize the mean-field energy at the configured lambda
sweep    lambda continuation over [run] lambda_grid
bubbles  Energy slopes of the bubble family
limit    Residuals and instability witnesses of the limit solutions
probe    Trudinger-Moser ratios along the bubble family

Environment Variables:
LIOUVILLE_THREADS     Overrides --threads

Exit codes: 0 ok, 2 config error, 3 solver failure, 4 precondition violation
        """
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS, help="Study to run")
    parser.add_argument("--config", required=True, help="Scenario configuration file")
    parser.add_argument("--out", default=None, help="Output directory (default: [run] output_dir)")
    parser.add_argument("--seed", type=int, default=None, help="Seed of the randomized eigen-solves")
    parser.add_argument("--threads", type=int, default=1, help="Workers for cold-started sweeps (default: 1)")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="Only log errors")
    return parser


def resolve_threads(requested):
    """--threads unless LIOUVILLE_THREADS holds a positive integer."""
    value = os.environ.get(THREADS_VARIABLE)
    if value:
        try:
            threads = int(value)
        except ValueError:
            logging.getLogger(__name__).warning("ignoring %s=%r: not an integer", THREADS_VARIABLE, value)
        else:
            if threads > 0:
                return threads
    return max(1, requested)


def run(args):
    """
    Run one subcommand.

    Returns:
        int: process exit code
    """
    config = parse_config(args.config)
    orchestrator = ScenarioOrchestrator(config, output_dir=args.out, threads=resolve_threads(args.threads),
                                        seed=args.seed)
    if args.subcommand == "solve":
        _, solve = orchestrator.solve()
        if not solve.converged:
            print(f"Error: solve did not converge ({solve.status})", file=sys.stderr)
            return SolverFailure.exit_code
        return 0
    getattr(orchestrator, args.subcommand)()
    return 0


def main(argv=None):
    """Main function of the liouville-lab command."""

    # Minimum Python version check
    if sys.version_info < (3, 10):
        print("Python 3.10 or higher is required to run this script.")
        print(f"Current Python version: {sys.version}")
        sys.exit(1)

    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.ERROR if args.quiet else logging.WARNING
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        code = run(args)
    except LiouvilleError as e:
        print(f"Error: {str(e)}", file=sys.stderr)
        sys.exit(e.exit_code)
    except KeyboardInterrupt:
        print("\nRun interrupted by user", file=sys.stderr)
        sys.exit(1)
    except Exception as e:
        print(f"Run failed with error: {str(e)}", file=sys.stderr)
        sys.exit(1)
    sys.exit(code)


if __name__ == "__main__":
    main()
