#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Main CLI entry point for the k-Hessian laboratory.
"""

import argparse
import sys
import logging
from typing import List, Optional

from . import __version__
from . import config
from .config import (
    BETA_SWEEP, CAMPAIGN_DIMENSIONS, DEFAULT_CAMPAIGN_SAMPLES, DEFAULT_FMAX, DEFAULT_PROPS_SAMPLES,
    DEFAULT_SEED, DEFAULT_THREADS, EXIT_INTERRUPTED, EXIT_INVARIANT, PROPS_DIMENSIONS, RIGIDITY_EPSILON,
    RIGIDITY_GROWTH, RIGIDITY_POINTS, RIGIDITY_RADII, SAMPLER_PROFILES, SPECTRAL_SAMPLES,
)
from .errors import ConfigError, HesslabError
from .utils.path import resolve_out_dir
from .commands.verify import cmd_verify_props
from .commands.concavity import cmd_verify_concavity
from .commands.solve import cmd_solve
from .commands.scan import cmd_scan_pogorelov
from .commands.rigidity import cmd_experiment_rigidity, load_rigidity_config
from .commands.runs import cmd_list_runs


def setup_logging(verbose: bool, json_mode: bool = False):
    """Configure logging for the CLI tool."""
    for h in logging.root.handlers[:]:
        logging.root.removeHandler(h)
    level = logging.DEBUG if verbose else logging.INFO
    if json_mode:
        # For JSON mode: send ALL logs to stderr, keep stdout clean for JSON
        logging.basicConfig(
            level=level,
            format="[DEBUG] %(asctime)s [%(levelname)s] %(name)s: %(message)s" if verbose else "[%(levelname)s] %(message)s",
            handlers=[logging.StreamHandler(sys.stderr)]
        )
    else:
        logging.basicConfig(
            level=level,
            format="%(asctime)s [%(levelname)s] %(message)s",
            handlers=[logging.StreamHandler(sys.stdout)]
        )

    if verbose:
        logging.debug("Verbose logging enabled (DEBUG level).")


def _list_of(kind):
    def parse(text: str):
        try:
            values = [kind(part) for part in text.split(",") if part.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a comma-separated list, got {text!r}")
        if not values:
            raise argparse.ArgumentTypeError("list must not be empty")
        return values
    parse.__name__ = f"{kind.__name__}_list"
    return parse


int_list = _list_of(int)
float_list = _list_of(float)
str_list = _list_of(str)


def _joined(values) -> str:
    return ",".join(str(v) for v in values)


def _add_json_flag(parser):
    # SUPPRESS keeps a global --json from being reset by the subparser default
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="Output as JSON")


def create_parser():
    """Create and configure the argument parser."""
    parser = argparse.ArgumentParser(
        prog="hesslab",
        description="k-Hessian laboratory - symmetric functions, concavity campaigns and a Dirichlet solver",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""Examples:
  # Property suite for sigma_k and the spectral lift
  %(prog)s verify-props --samples 10000 --seed 1

  # Concavity campaign at the default constants, with a constant search
  %(prog)s --out runs verify-concavity --n 3,4,5 --samples 100000 --search --json

  # Solve a bundled problem and refine it
  %(prog)s solve --config hesslab/configs/radial_n3.json --grid-points 33

  # Pogorelov scan of a saved solution
  %(prog)s scan-pogorelov --solution hesslab_out/radial_n3_g33.hess --betas 1,2,4,8

  # Rigidity table on growing balls
  %(prog)s experiment-rigidity --radii 1,2,4,8 --epsilon 0.05

  # Replay a run from its manifest
  %(prog)s solve --config hesslab_out/run_20250101_120000_ab12cd34.manifest.json
        """
    )

    # Global options
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true",
                        help="Enable verbose (DEBUG) output")
    parser.add_argument("--json", action="store_true",
                        help="Output results as JSON instead of human-readable text")
    parser.add_argument("--threads", type=int, default=DEFAULT_THREADS,
                        help=f"Worker threads (default: {DEFAULT_THREADS}; outputs do not depend on it)")
    parser.add_argument("--out",
                        help=f"Output directory (default: {config.DEFAULT_OUT_DIR}; ${config.OUT_ENV_VAR} overrides)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"Root random seed (default: {DEFAULT_SEED})")

    subparsers = parser.add_subparsers(dest="command", required=True, help="Available commands")

    _add_verify_parsers(subparsers)
    _add_solver_parsers(subparsers)
    _add_experiment_parsers(subparsers)
    _add_runs_parser(subparsers)

    return parser


def _add_verify_parsers(subparsers):
    """Add verification command parsers."""
    props_parser = subparsers.add_parser("verify-props", help="Check symmetric-function and spectral properties")
    props_parser.add_argument("--samples", type=int, default=DEFAULT_PROPS_SAMPLES,
                              help=f"Samples per property and (n, k) (default: {DEFAULT_PROPS_SAMPLES})")
    props_parser.add_argument("--dimensions", type=int_list, default=list(PROPS_DIMENSIONS),
                              help=f"Comma-separated values of n (default: {_joined(PROPS_DIMENSIONS)})")
    props_parser.add_argument("--spectral-samples", type=int, default=SPECTRAL_SAMPLES,
                              help=f"Matrix samples for the spectral checks (default: {SPECTRAL_SAMPLES})")
    props_parser.add_argument("--inject-fault", help=argparse.SUPPRESS)
    _add_json_flag(props_parser)

    conc_parser = subparsers.add_parser("verify-concavity", help="Monte-Carlo campaign for the concavity inequality")
    conc_parser.add_argument("--n", type=int_list, default=list(CAMPAIGN_DIMENSIONS),
                             help=f"Comma-separated dimensions (default: {_joined(CAMPAIGN_DIMENSIONS)})")
    conc_parser.add_argument("--profiles", type=str_list, default=list(SAMPLER_PROFILES),
                             help=f"Sampler profiles (default: {_joined(SAMPLER_PROFILES)})")
    conc_parser.add_argument("--samples", type=int, default=DEFAULT_CAMPAIGN_SAMPLES,
                             help=f"Samples per dimension (default: {DEFAULT_CAMPAIGN_SAMPLES})")
    conc_parser.add_argument("--delta0", type=float, help="Override delta0")
    conc_parser.add_argument("--K", type=float, help="Override K")
    conc_parser.add_argument("--A", type=float, help="Override the nonsemiconvex threshold A")
    conc_parser.add_argument("--lambda1-min", type=float, help="Override the lambda_1 threshold C_lambda1")
    conc_parser.add_argument("--fmax", type=float, default=DEFAULT_FMAX,
                             help=f"Upper bound on F used for A (default: {DEFAULT_FMAX})")
    conc_parser.add_argument("--search", action="store_true",
                             help="Search the (delta0, K, C_lambda1) grid after sampling")
    _add_json_flag(conc_parser)


def _add_solver_parsers(subparsers):
    """Add solver command parsers."""
    solve_parser = subparsers.add_parser("solve", help="Solve a Dirichlet problem from a JSON config")
    solve_parser.add_argument("--config", required=True,
                              help="Problem config (or a run manifest to replay)")
    solve_parser.add_argument("--grid-points", type=int,
                              help="Override points per axis for refinement studies")
    _add_json_flag(solve_parser)


def _add_experiment_parsers(subparsers):
    """Add experiment command parsers."""
    scan_parser = subparsers.add_parser("scan-pogorelov", help="Scan (-u)^beta lambda_1 over a solution")
    scan_parser.add_argument("--solution", help="Solution snapshot (.hess)")
    scan_parser.add_argument("--betas", type=float_list, default=list(BETA_SWEEP),
                             help=f"Comma-separated beta sweep (default: {_joined(BETA_SWEEP)})")
    scan_parser.add_argument("--B", type=float, default=0.0, help="Gradient weight B (default: 0)")
    scan_parser.add_argument("--variant", choices=["gradient", "position"], default="gradient",
                             help="Extra term of the test function (default: gradient)")
    scan_parser.add_argument("--refine", help="Problem config to solve at several grids")
    scan_parser.add_argument("--refine-points", type=int_list, default=[17, 33],
                             help="Grid sizes of the refinement study (default: 17,33)")
    _add_json_flag(scan_parser)

    rig_parser = subparsers.add_parser("experiment-rigidity", help="Hessian statistics on growing balls")
    rig_parser.add_argument("--config", help="JSON with n, radii, epsilon, gamma, points (flags override)")
    rig_parser.add_argument("--n", type=int, help="Dimension (default: 3)")
    rig_parser.add_argument("--radii", type=float_list,
                            help=f"Increasing radii (default: {_joined(RIGIDITY_RADII)})")
    rig_parser.add_argument("--epsilon", type=float,
                            help=f"Boundary perturbation size (default: 0; e.g. {RIGIDITY_EPSILON})")
    rig_parser.add_argument("--gamma", type=float, help=f"Perturbation growth exponent (default: {RIGIDITY_GROWTH})")
    rig_parser.add_argument("--points", type=int, help=f"Points per axis (default: {RIGIDITY_POINTS})")
    _add_json_flag(rig_parser)


def _add_runs_parser(subparsers):
    """Add run listing parser."""
    runs_parser = subparsers.add_parser("list-runs", help="List run manifests in the output directory")
    _add_json_flag(runs_parser)


def _rigidity_settings(args) -> dict:
    settings = {"n": 3, "radii": list(RIGIDITY_RADII), "epsilon": 0.0, "gamma": RIGIDITY_GROWTH,
                "points": RIGIDITY_POINTS}
    if args.config:
        settings.update(load_rigidity_config(args.config))
    for key in settings:
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    return settings


def run_command(args) -> int:
    """Dispatch a parsed command line; returns the exit code."""
    as_json = args.json
    if args.threads < 1:
        raise ConfigError(f"--threads must be at least 1, got {args.threads}")
    config.THREADS = args.threads
    config.SHOW_PROGRESS = not as_json and sys.stderr.isatty()
    out_dir = resolve_out_dir(args.out)
    config.OUT_DIR = str(out_dir)
    logging.debug("Output directory: %s, threads: %d", out_dir, args.threads)

    if args.command == "verify-props":
        logging.info("Running property suite (samples=%d, seed=%d)", args.samples, args.seed)
        return cmd_verify_props(out_dir, args.seed, args.samples, args.dimensions,
                                args.spectral_samples, args.inject_fault, as_json)

    elif args.command == "verify-concavity":
        logging.info("Running concavity campaign for n=%s (samples=%d, seed=%d)", args.n, args.samples, args.seed)
        overrides = {"delta0": args.delta0, "K": args.K, "A": args.A, "C_lambda1": args.lambda1_min}
        return cmd_verify_concavity(out_dir, args.seed, args.samples, args.n, args.profiles,
                                    overrides, args.fmax, args.search, as_json)

    elif args.command == "solve":
        logging.info("Solving %s", args.config)
        return cmd_solve(out_dir, args.config, args.grid_points, as_json)

    elif args.command == "scan-pogorelov":
        logging.info("Pogorelov scan (betas=%s, B=%g)", args.betas, args.B)
        return cmd_scan_pogorelov(out_dir, args.solution, args.betas, args.B, args.variant,
                                  args.refine, args.refine_points, as_json)

    elif args.command == "experiment-rigidity":
        settings = _rigidity_settings(args)
        logging.info("Rigidity experiment: %s", settings)
        return cmd_experiment_rigidity(out_dir, settings["n"], settings["radii"], settings["epsilon"],
                                       settings["gamma"], settings["points"], as_json)

    elif args.command == "list-runs":
        return cmd_list_runs(out_dir, as_json)

    raise ConfigError(f"unknown command {args.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    json_mode = getattr(args, 'json', False)
    setup_logging(args.verbose, json_mode)
    logging.debug("Parsed arguments: %s", args)

    try:
        return run_command(args)

    except HesslabError as e:
        if json_mode:
            from .jsonio import error
            debug_info = dict(e.details, exception_type=type(e).__name__) if (e.details or args.verbose) else None
            return error(args.command, str(e), debug=debug_info, code=e.exit_code)
        logging.error("%s: %s", type(e).__name__, e, exc_info=args.verbose)
        for key, value in e.details.items():
            logging.error("  %s: %s", key, value)
        return e.exit_code
    except KeyboardInterrupt:
        if json_mode:
            from .jsonio import error
            return error(args.command, "Operation interrupted by user", code=EXIT_INTERRUPTED)
        logging.warning("Operation interrupted by user.")
        return EXIT_INTERRUPTED
    except Exception as e:
        if json_mode:
            from .jsonio import error
            debug_info = {"exception_type": type(e).__name__} if args.verbose else None
            return error(args.command, str(e), debug=debug_info, code=EXIT_INVARIANT)
        logging.error("Error occurred: %s", e, exc_info=args.verbose)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
