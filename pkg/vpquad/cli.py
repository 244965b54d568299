"""
Command-line entry point.

    vpq run [config.toml] [--scenario flip] [--out out] [--plot]
    vpq trim [--config config.toml]
    vpq acceptance [--workers 4]

Exit codes: 0 success, 1 runtime or configuration failure, 2 usage error.
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Optional

from vpquad import config
from vpquad.core.acceptance import acceptance_table, run_acceptance
from vpquad.core.errors import ConfigError, VpquadError
from vpquad.core.rigid_body import hover_trim
from vpquad.core.rotor_aero import thrust_residual
from vpquad.core.scenario_config import Config, load_config
from vpquad.core.sim_engine import build_scenario, run_scenario
from vpquad.core.telemetry import write_telemetry

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML scenario configuration")
    common.add_argument("--out", type=Path, help="output directory (default from config or VPQUAD_OUTPUT_DIR)")
    common.add_argument("--decimation", type=_positive_int, help="telemetry decimation factor")
    common.add_argument("--dt", type=_positive_float, help="simulation step [s]")
    common.add_argument("--duration", type=_positive_float, help="simulated time [s]")
    common.add_argument("--scenario", choices=config.SCENARIO_KINDS, help="scenario kind")
    common.add_argument("--workers", type=_positive_int, help="worker processes for acceptance runs")
    common.add_argument("--plot", action="store_true", help="save time-history figures")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog="vpq", description="Variable-pitch quadrotor flight simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="simulate one scenario and write telemetry")
    run.add_argument("config_path", nargs="?", type=Path, metavar="config", help="TOML scenario configuration")
    sub.add_parser("trim", parents=[common], help="print the hover trim point")
    sub.add_parser("acceptance", parents=[common], help="run all scenarios and check the acceptance criteria")
    return parser


def _setup_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL, logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _load(args) -> Config:
    path = getattr(args, "config_path", None) or args.config
    cfg = load_config(path) if path else Config()
    return cfg.with_overrides(kind=args.scenario, dt=args.dt, duration=args.duration)


def _cmd_trim(args) -> int:
    cfg = _load(args)
    rotor, veh = cfg.rotor_model(), cfg.vehicle_params()
    trim = hover_trim(rotor, veh)
    print("=== Hover Trim ===")
    print(f"Thrust gain K:       {trim.thrust_gain:.4f} N")
    print(f"Thrust coefficient:  {trim.thrust_coeff:.6f}")
    print(f"Collective:          {math.degrees(trim.collective):.4f} deg ({trim.collective:.6f} rad)")
    print(f"Inflow ratio:        {trim.inflow:.6f}")
    print(f"Torque coefficient:  {trim.torque_coeff:.4e}")
    print(f"Rotor thrust:        {trim.rotor_thrust:.4f} N (Mg/4 = {veh.weight / 4:.4f} N)")
    print(f"Rotor torque:        {trim.rotor_torque:.4f} N m")
    print(f"Thrust residual:     {abs(thrust_residual(trim.thrust_coeff, trim.collective, rotor)):.2e}")
    return EXIT_OK


def _cmd_run(args) -> int:
    cfg = _load(args)
    out_dir = args.out or Path(cfg.output.path)
    sc = build_scenario(cfg.scenario.kind, cfg, decimation=args.decimation)
    result = run_scenario(sc, progress_callback=print)

    write_telemetry(result.decimated, out_dir / f"{sc.name}.csv")
    if result.summary is not None:
        summary_path = out_dir / f"{sc.name}_summary.json"
        summary_path.write_text(json.dumps(result.summary.as_dict(), indent=2), encoding="utf-8")
        print(f"\n=== Summary ({sc.name}) ===")
        for key, value in result.summary.as_dict().items():
            print(f"{key}: {value}")
    if args.plot and not result.telemetry.empty:
        from vpquad.plots import save_time_histories

        for path in save_time_histories(result, out_dir):
            print(f"Chart saved to '{path}'")

    if result.error:
        print(f"Error: {result.error}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def _cmd_acceptance(args) -> int:
    cfg = _load(args)
    overrides = {"decimation": args.decimation} if args.decimation else {}
    criteria, results = run_acceptance(cfg, max_workers=args.workers, **overrides)
    if args.out or args.plot:
        out_dir = args.out or Path(cfg.output.path)
        for result in results.values():
            write_telemetry(result.decimated, out_dir / f"{result.name}.csv")
            if args.plot and not result.telemetry.empty:
                from vpquad.plots import save_time_histories

                save_time_histories(result, out_dir)
    print(acceptance_table(criteria).to_string(index=False))
    passed = all(c.passed for c in criteria)
    print(f"\nAcceptance: {'PASS' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_FAILURE


COMMANDS = {"run": _cmd_run, "trim": _cmd_trim, "acceptance": _cmd_acceptance}


def cli_main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    _setup_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"Config error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except (VpquadError, OSError) as e:
        logger.error("%s failed: %s", args.command, e)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(cli_main())
