"""nevanlab: numerical laboratory for Nevanlinna characteristics, heights and rational-point counts.

Usage: python cli.py [--config run.toml] [--curve NAME] [--out DIR] <command> [options]
"""

import argparse
import logging
import sys

from commands import auxpoly, cartan, count, cover, fmt, heights, suite, tcurve, windows, zeros
from engine.errors import InputError, LabError
from utils.config import load_run_config
from utils.constants import VERSION
from utils.log import configure_logging

logger = logging.getLogger("nevanlab")

# Same order as the acceptance suite walks the modules.
COMMAND_MODULES = {
    "tcurve": tcurve,
    "fmt": fmt,
    "zeros": zeros,
    "cover": cover,
    "cartan": cartan,
    "heights": heights,
    "auxpoly": auxpoly,
    "count": count,
    "windows": windows,
    "suite": suite,
}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code instead of argparse's default."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(InputError.exit_code, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nevanlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nevanlab {VERSION}")
    parser.add_argument("--config", help="run config (TOML)")
    parser.add_argument("--curve", help="curve config path or shipped curve name")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--tol", type=float, help="quadrature/evaluation tolerance")
    parser.add_argument("--seed", type=int, help="seed for randomised sweeps")
    parser.add_argument("--jobs", type=int, help="worker threads for table sweeps")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for module in COMMAND_MODULES.values():
        module.add_parser(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = load_run_config(args.config).with_overrides(
            curve=args.curve, out=args.out, tol=args.tol, seed=args.seed, jobs=args.jobs
        )
        if config.tol <= 0 or config.jobs < 1:
            raise InputError("--tol must be positive and --jobs at least 1")
        logger.info("nevanlab %s: %s (curve=%s, seed=%d)", VERSION, args.command, config.curve, config.seed)
        return COMMAND_MODULES[args.command].run(args, config)
    except LabError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"nevanlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
