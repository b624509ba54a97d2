"""Command line: ``jetex run``, ``jetex extend`` and ``jetex geom-suite``."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from jetex._config import set_lab_options, threads_from_env

from ._experiment import FORMATS, SUITES, ExperimentConfig
from ._report import Report, emit, render
from ._run import run, run_extension

logger = logging.getLogger(__name__)

# Exit status for configs that fail validation; no report is written.
EXIT_INVALID = 2


def _jet_entry(text: str) -> Any:
    """``1.5`` or ``1+2j`` for one coefficient, ``1,0.5`` for a setup-B row."""
    if "," in text:
        return [float(part) for part in text.split(",")]
    value = complex(text.replace(" ", ""))
    return value.real if value.imag == 0 else {"re": value.real, "im": value.imag}


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="RNG seed")
    parser.add_argument("--out", default=None, help="Report path (default: standard output)")
    parser.add_argument(
        "--format",
        choices=FORMATS,
        default=None,
        help="Report format (default: csv for a .csv path, json otherwise)",
    )
    parser.add_argument("--verbose", action="store_true", help="Log progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetex", description="Numerical checks of weighted L2 jet extension"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Run a suite from a config file or flags")
    run_parser.add_argument("--config", default=None, help="JSON experiment config")
    run_parser.add_argument("--suite", choices=SUITES, default=None, help="Suite to run")
    _add_output_options(run_parser)

    extend = commands.add_parser("extend", help="Extend one jet through the induction")
    extend.add_argument("--setup", choices=("A", "B"), default="A")
    extend.add_argument(
        "--jet",
        nargs="+",
        default=None,
        help="Taylor coefficients (setup A) or comma-separated z2-rows (setup B)",
    )
    extend.add_argument("--phi", default="zero", help="Weight name, e.g. radial:quadratic:1")
    extend.add_argument("--epsilons", type=float, nargs="+", default=None)
    extend.add_argument("--delta", type=float, default=None)
    extend.add_argument("--resolution", type=int, nargs=2, default=None)
    _add_output_options(extend)

    geom = commands.add_parser("geom-suite", help="Comparison geometry checks on a model")
    geom.add_argument("--model", default="sphere:1", help="Model name, e.g. hyperbolic:1")
    geom.add_argument("--radius", type=float, default=None, help="Tangent ball radius")
    geom.add_argument("--samples", type=int, default=None, help="Samples per batch")
    _add_output_options(geom)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Merge a config file (``run --config``) with command line flags.

    Raises:
        FileNotFoundError: If the config file does not exist
        ConfigError: If the merged config fails validation
    """
    data: dict[str, Any] = {}
    if args.command == "run":
        if args.config is not None:
            data = ExperimentConfig.from_json(args.config).to_dict()
        if args.suite is not None:
            data["suite"] = args.suite
    elif args.command == "extend":
        # The extension of a given jet draws no random data.
        data = {"suite": "pipeline", "seed": 0, "setup": args.setup, "phi": args.phi}
        if args.jet is not None:
            data["jet"] = [_jet_entry(text) for text in args.jet]
        if args.epsilons is not None:
            data["epsilons"] = args.epsilons
        if args.delta is not None:
            data["delta"] = args.delta
        if args.resolution is not None:
            data["resolution"] = args.resolution
    else:
        data = {"suite": "geom", "model": args.model}
        if args.radius is not None:
            data["radius"] = args.radius
        if args.samples is not None:
            data["samples"] = args.samples

    if args.seed is not None:
        data["seed"] = args.seed
    if args.out is not None:
        data["out"] = args.out
    if args.format is not None:
        data["format"] = args.format
    elif data.get("out") and Path(data["out"]).suffix.lower() == ".csv":
        data["format"] = "csv"
    return ExperimentConfig.from_dict(data)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``jetex`` command.

    Returns:
        0 if every row passes, 1 if a row fails, 2 for an invalid config
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    try:
        threads = threads_from_env()
        config = config_from_args(args)
    except (FileNotFoundError, ValueError) as e:
        print(f"jetex: {e}", file=sys.stderr)
        return EXIT_INVALID

    with set_lab_options(threads=threads):
        report: Report = run_extension(config) if args.command == "extend" else run(config)

    if config.out is None:
        sys.stdout.write(render(report, config.format))
    else:
        path = emit(report, config.out, config.format)
        logger.info("wrote %s", path)
    return report.exit_code


__all__ = ["EXIT_INVALID", "build_parser", "config_from_args", "main"]
