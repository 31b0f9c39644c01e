"""Command-line entry point: ``ma-relay {run,bounds,landscape,validate}``.

Exit status: 0 success, 1 validation failed, 2 usage error, 3 malformed config,
4 infeasible parameters, 5 campaign finished with error rows.
"""
import argparse
import logging
import os
import sys

import pandas as pd
import yaml
from pydantic import ValidationError

from src.campaign import improvement_table, preflight, run_campaign
from src.config import AppConfig, CampaignConfig
from src.core.bounds import aar_af_upper, aar_df_upper
from src.core.channel import ChannelRealization, Region
from src.core.errors import InfeasiblePlacementError
from src.core.rate import SystemParams
from src.services.baselines.grid import gain_grid
from src.services.baselines.layouts import fpa_layout
from src.services.optimizer.pga import PgaSchedule, optimize_df
from src.validation import run_validation

logger = logging.getLogger("ma_relay.cli")

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2
EXIT_MALFORMED_CONFIG = 3
EXIT_INFEASIBLE = 4
EXIT_CAMPAIGN_ERRORS = 5


def _cmd_run(args: argparse.Namespace, app: AppConfig) -> int:
    try:
        config = CampaignConfig.from_yaml(args.config)
    except (OSError, yaml.YAMLError, ValidationError, ValueError) as e:
        print(f"malformed config {args.config}: {e}", file=sys.stderr)
        return EXIT_MALFORMED_CONFIG
    if args.verify:
        config = config.model_copy(update={"verify_invariants": True})
    preflight(config)

    result = run_campaign(config, workers=args.workers or app.workers, progress=True)
    result.write_summary(args.out)
    if args.trials_out:
        result.write_trials(args.trials_out)
    logger.info("wrote %d summary rows to %s", len(result.summary), args.out)

    gains = improvement_table(result.summary)
    if not gains.empty:
        logger.info("improvement of proposed over baselines (%%):\n%s", gains.to_string(index=False))
    if result.has_errors:
        for message in result.errors:
            print(f"error: {message}", file=sys.stderr)
        return EXIT_CAMPAIGN_ERRORS
    return EXIT_OK


def _cmd_bounds(args: argparse.Namespace, app: AppConfig) -> int:
    params = SystemParams.from_snr_db(args.n, args.snr_db, args.noise)
    l_r = args.l_r or args.l
    l_t = args.l_t or args.l
    relaying = [args.relaying] if args.relaying else ["df", "af"]
    for name in relaying:
        if name == "df":
            value = aar_df_upper(l_r, l_t, args.rho_sq, args.rho_sq, params, convention=args.alpha_convention)
        else:
            value = aar_af_upper(l_r, l_t, args.rho_sq, args.rho_sq, params)
        print(f"{name.upper()} AAR bound: {value:.6f}")
    return EXIT_OK


def _cmd_landscape(args: argparse.Namespace, app: AppConfig) -> int:
    region = Region(side_length=args.a, min_spacing=args.min_spacing, wavelength=1.0)
    realization = ChannelRealization.from_seed(args.seed, args.l, args.l)
    paths = realization.paths_sr if args.stage == "sr" else realization.paths_rd
    grid = gain_grid(paths, region, args.step)
    grid.to_csv(args.out)
    logger.info("wrote %dx%d gain grid to %s", *grid.shape, args.out)

    if args.positions_out:
        params = SystemParams.from_snr_db(args.n, args.snr_db)
        init = fpa_layout(args.n, region)
        result = optimize_df(realization.paths_sr, realization.paths_rd, region, params, PgaSchedule(), init, init)
        rows = [
            {"stage": stage, "index": n, "x": x, "y": y}
            for stage, placement in (("sr", result.placement_rx), ("rd", result.placement_tx))
            for n, (x, y) in enumerate(placement.positions)
        ]
        pd.DataFrame(rows).to_csv(args.positions_out, index=False, float_format="%.9g")
        logger.info("wrote optimized positions for N=%d to %s", args.n, args.positions_out)
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace, app: AppConfig) -> int:
    results = run_validation(fast=args.fast)
    failed = [r for r in results if not r.passed]
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    return EXIT_VALIDATION_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ma-relay", description="Movable-antenna DF/AF relaying simulations")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte Carlo campaign from a YAML config")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True, help="summary CSV path")
    run.add_argument("--trials-out", help="optional per-trial CSV path")
    run.add_argument("--workers", type=int, help="worker threads (default: MA_RELAY_WORKERS or 1)")
    run.add_argument("--verify", action="store_true", help="check dominance/monotonicity invariants on every trial")
    run.set_defaults(handler=_cmd_run)

    bounds = sub.add_parser("bounds", help="print the average-rate upper bounds")
    bounds.add_argument("--relaying", choices=["df", "af"], help="default: print both")
    bounds.add_argument("--l", type=int, default=5, help="paths per side")
    bounds.add_argument("--l-r", type=int, help="source-relay paths (overrides --l)")
    bounds.add_argument("--l-t", type=int, help="relay-destination paths (overrides --l)")
    bounds.add_argument("--n", type=int, default=1)
    bounds.add_argument("--snr-db", type=float, default=10.0)
    bounds.add_argument("--noise", type=float, default=1.0)
    bounds.add_argument("--rho-sq", type=float, default=1.0)
    bounds.add_argument("--alpha-convention", choices=["small_argument", "as_printed"], default="small_argument")
    bounds.set_defaults(handler=_cmd_bounds)

    landscape = sub.add_parser("landscape", help="write the single-antenna gain grid of one realization")
    landscape.add_argument("--a", type=float, required=True, help="region side in wavelengths")
    landscape.add_argument("--step", type=float, default=0.01, help="grid step in wavelengths")
    landscape.add_argument("--seed", type=int, required=True)
    landscape.add_argument("--out", required=True)
    landscape.add_argument("--l", type=int, default=5)
    landscape.add_argument("--stage", choices=["sr", "rd"], default="sr")
    landscape.add_argument("--min-spacing", type=float, default=0.5)
    landscape.add_argument("--n", type=int, default=1, help="antennas for --positions-out")
    landscape.add_argument("--snr-db", type=float, default=10.0)
    landscape.add_argument("--positions-out", help="also write two-stage optimized positions")
    landscape.set_defaults(handler=_cmd_landscape)

    validate = sub.add_parser("validate", help="run the built-in invariant suite")
    validate.add_argument("--fast", action="store_true")
    validate.set_defaults(handler=_cmd_validate)
    return parser


def _check_ranges(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    for flag in ("l", "l_r", "l_t", "n", "workers"):
        value = getattr(args, flag, None)
        if value is not None and value < 1:
            parser.error(f"--{flag.replace('_', '-')} must be >= 1")
    for flag in ("a", "step", "noise", "rho_sq", "min_spacing"):
        value = getattr(args, flag, None)
        if value is not None and value <= 0:
            parser.error(f"--{flag.replace('_', '-')} must be > 0")


def main(argv: list[str] | None = None) -> int:
    app = AppConfig()
    logging.basicConfig(level=app.log_level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    if app.tracking_enabled:
        os.environ.setdefault("OPIK_PROJECT_NAME", app.opik_project)
    else:
        os.environ.setdefault("OPIK_TRACK_DISABLE", "true")

    parser = build_parser()
    args = parser.parse_args(argv)
    _check_ranges(parser, args)
    try:
        return args.handler(args, app)
    except InfeasiblePlacementError as e:
        print(f"infeasible parameters: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
