"""Command-line entry point for maeda-lab.

Results go to standard output (or --output) as JSON or CSV; logs and error
lines go to standard error. Exit codes: 0 success, 1 internal failure,
2 invalid input or bad flags, 3 inconclusive result under --strict.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from pydantic import ValidationError

from .cli.commands import HANDLERS
from .cli.output import emit, error_line, render_csv, render_json
from .config import settings
from .errors import LabError, UsageError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class LabArgumentParser(argparse.ArgumentParser):
    """Reports bad flags as a UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = LabArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default=None, help="Write to PATH instead of standard output.")
    common.add_argument("--workers", type=int, default=None, help="Worker processes (default: MAEDA_LAB_WORKERS).")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--strict", action="store_true", help="Exit 3 when the result is inconclusive.")
    common.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, default=None)
    common.add_argument("--enclosure-terms", type=int, default=None)

    parser = LabArgumentParser(prog="maeda-lab", description="Exact d-cycle densities and Chebotarev experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", parents=[common], help="Count permutations of S_n by d-cycles.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--brute", action="store_true", help="Also enumerate S_n exhaustively.")
    p.add_argument("--samples", type=int, default=0, help="Also run a Monte Carlo census.")

    p = sub.add_parser("seq", parents=[common], help="Exact table of a(0..imax).")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--imax", type=int, required=True)
    p.add_argument("--closed", action="store_true", help="Cross-check against the closed form.")

    p = sub.add_parser("density", parents=[common], help="Tower recursion over explicit degrees.")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--degrees", required=True, help="Comma-separated, strictly increasing.")
    p.add_argument("--guaranteed", action="store_true", help="Include interval columns in CSV.")

    p = sub.add_parser("effective", parents=[common], help="Lower bound from cusp-form towers.")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--weights", default=None, help="Explicit comma-separated weights.")

    p = sub.add_parser("scan", parents=[common], help="Chebotarev scan of one polynomial.")
    p.add_argument("--poly", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--plimit", type=int, required=True)
    p.add_argument("--budget", type=int, default=None, help="Prime bound for the S_n certificate.")

    p = sub.add_parser("classes", parents=[common], help="Frequencies of factorization patterns.")
    p.add_argument("--poly", required=True)
    p.add_argument("--plimit", type=int, required=True)

    p = sub.add_parser("maeda", parents=[common], help="T_2 charpoly evidence per weight.")
    p.add_argument("--weights", required=True, help='Range "12..200" or list "12,24".')
    p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("tower-scan", parents=[common], help="Joint scan of several polynomials.")
    p.add_argument("--polys", required=True, help='Semicolon-separated, e.g. "x^5-x-1;x^6-x-1".')
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--plimit", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)
    return parser


def _fail(code: str, message: str, status: int) -> int:
    sys.stderr.write(error_line(code, message) + "\n")
    return status


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail(exc.code, str(exc), EXIT_INVALID)
    logging.basicConfig(
        stream=sys.stderr,
        level=(args.log_level or settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        result = HANDLERS[args.command](args)
    except LabError as exc:
        return _fail(exc.code, str(exc), EXIT_INVALID)
    except ValidationError as exc:
        return _fail("validation_error", str(exc), EXIT_INVALID)
    except Exception as exc:
        logger.exception("%s failed", args.command)
        return _fail("internal_error", f"{type(exc).__name__}: {exc}", EXIT_INTERNAL)

    text = render_csv(result) if args.format == "csv" else render_json(result)
    emit(text, args.output)
    if args.strict and not result.conclusive:
        logger.warning("%s result is inconclusive", args.command)
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
