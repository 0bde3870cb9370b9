from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from typing import Optional, TextIO

from magnotherm import checks, export
from magnotherm.config import load_config
from magnotherm.exceptions import ConfigError, DomainError, NumericError, ParameterError
from magnotherm.model import DEFAULT_DELTA_A, DriftConvention, SystemParams
from magnotherm.sweep import (
    DEFAULT_COUNT,
    PRESET_NAMES,
    RESONANT_CAVITY_DELTA_A,
    SteadyStateReport,
    SweepSpec,
    evaluate_point,
    preset,
    run_sweep,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERIC = 2
EXIT_UNSTABLE = 3


def _configure_logging(level: int):
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)
    logging.captureWarnings(True)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magnotherm",
        description="Entropy production and correlations of a cavity magnomechanical system",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging.")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Only warnings and errors.")
    commands = parser.add_subparsers(dest="command", required=True)

    point = commands.add_parser("point", help="Evaluate a single parameter point.")
    point.add_argument("config", help="Config file without sweep keys.")

    sweep = commands.add_parser("sweep", help="Run the sweep defined in a config file.")
    sweep.add_argument("config", help="Config file with sweep.* keys.")
    sweep.add_argument("--out", default=None, help="CSV path (default: `output` key, else stdout).")
    _add_sweep_options(sweep)

    figure = commands.add_parser("preset", help="Run a figure-regime sweep.")
    figure.add_argument("name", choices=PRESET_NAMES)
    figure.add_argument("--out", default=None, help="CSV path (default: stdout).")
    figure.add_argument(
        "--delta-a",
        type=float,
        default=None,
        help=(
            f"Cavity detuning in units of omega_b (default: {DEFAULT_DELTA_A}, "
            f"{RESONANT_CAVITY_DELTA_A} for the fig4 presets)."
        ),
    )
    figure.add_argument(
        "--count",
        type=int,
        default=DEFAULT_COUNT,
        help=f"Grid points along the swept axis (default: {DEFAULT_COUNT}).",
    )
    figure.add_argument(
        "--drift-convention",
        choices=[c.value for c in DriftConvention],
        default=DriftConvention.CONSISTENT.value,
    )
    _add_sweep_options(figure)

    check = commands.add_parser("check", help="Cross-check one point against the ODE oracle.")
    check.add_argument("config", help="Config file without sweep keys.")
    return parser


def _add_sweep_options(parser: argparse.ArgumentParser):
    parser.add_argument("--jobs", type=int, default=1, help="Parallel workers (default: 1).")
    parser.add_argument(
        "--executor",
        choices=["threads", "processes"],
        default="processes",
        help="Parallel backend (default: processes).",
    )
    parser.add_argument(
        "--no-timestamp", action="store_true", help="Omit the timestamp comment line."
    )


def main(argv: Optional[list[str]] = None) -> int:
    args = build_arg_parser().parse_args(argv)
    if args.verbose:
        _configure_logging(logging.DEBUG)
    elif args.quiet:
        _configure_logging(logging.WARNING)
    else:
        _configure_logging(logging.INFO)

    try:
        if args.command == "point":
            return _point(args.config, sys.stdout)
        elif args.command == "sweep":
            return _sweep(args, sys.stdout)
        elif args.command == "preset":
            spec = preset(
                args.name,
                delta_a=args.delta_a,
                count=args.count,
                output=args.out,
                drift_convention=DriftConvention(args.drift_convention),
            )
            return _run(spec, args, sys.stdout)
        elif args.command == "check":
            return _check(args.config, sys.stdout)
    except (ParameterError, OSError) as e:
        logger.error("%s", e)
        return EXIT_INVALID
    except (NumericError, DomainError) as e:
        logger.error("%s", e)
        return EXIT_NUMERIC
    raise AssertionError(f"Unhandled command {args.command}")


def _single_point(filename: str) -> SystemParams:
    params = load_config(filename)
    if isinstance(params, SweepSpec):
        raise ConfigError(f"{filename} defines a sweep; use `magnotherm sweep`")
    return params


def _point(filename: str, out: TextIO) -> int:
    params = _single_point(filename)
    report = evaluate_point(params)
    write_report(params, report, out)
    if not report.stable:
        logger.error(
            "%s point (spectral abscissa %.6g)",
            "Marginally stable" if report.marginal else "Unstable",
            report.spectral_abscissa,
        )
        return EXIT_UNSTABLE
    return EXIT_OK


def _sweep(args: argparse.Namespace, out: TextIO) -> int:
    spec = load_config(args.config)
    if not isinstance(spec, SweepSpec):
        raise ConfigError(f"{args.config} has no sweep.* keys; use `magnotherm point`")
    if args.out is not None:
        spec = replace(spec, output=args.out)
    if not spec.name:
        spec = replace(spec, name=args.config)
    return _run(spec, args, out)


def _run(spec: SweepSpec, args: argparse.Namespace, out: TextIO) -> int:
    table = run_sweep(
        spec, jobs=args.jobs, executor=args.executor, timestamp=not args.no_timestamp
    )
    if spec.output is None:
        export.write_table(table, out, timestamp=not args.no_timestamp)
    return EXIT_OK


def _check(filename: str, out: TextIO) -> int:
    results = checks.run_checks(_single_point(filename))
    width = max(len(r.name) for r in results)
    for r in results:
        out.write(f"{r.label}  {r.name:<{width}}  {r.detail}\n")
    return EXIT_OK if checks.all_passed(results) else EXIT_NUMERIC


def write_report(params: SystemParams, report: SteadyStateReport, out: TextIO):
    out.write(f"parameters          {params}\n")
    if report.stable:
        status = "stable"
    elif report.marginal:
        status = "marginal"
    else:
        status = "unstable"
    out.write(f"stability           {status} (routh-hurwitz {report.hurwitz_stable})\n")
    out.write(f"spectral abscissa   {report.spectral_abscissa:.10g}\n")
    if not report.stable:
        return
    rows = [
        ("pi_total", report.pi_total),
        ("pi_mb", report.pi_mb),
        ("pi_trace", report.pi_trace),
        ("phi", report.phi),
        ("mutual_info", report.mutual_info),
        ("weak_coupling_estimate", report.weak_coupling_estimate),
        ("weak_coupling_ratio", report.weak_coupling_ratio),
    ]
    for name, value in rows:
        out.write(f"{name:<20}{value:.10g}\n")
    out.write("symplectic spectrum " + " ".join(f"{nu:.10g}" for nu in report.nu) + "\n")
    if report.irreversible_offdiagonal > 0:
        out.write(f"off-diagonal A_irr  {report.irreversible_offdiagonal:.3g}\n")
