import argparse
import logging
import re
import sys
from typing import List, Optional

from pydantic import ValidationError

from src.core.harbourne.errors import HarbourneError, InvalidDegreeError, InvalidTVectorError
from src.utils.constants import EXIT_USAGE, NODE_BUDGET_ENV, SUPPORTED_PRIMES
from src.utils.helpers import SearchSettings, load_settings, setup_logging

from .commands import COMMANDS, UsageError

log = logging.getLogger(__name__)

FORMATS = ("table", "json", "csv")
NEGATIVE_FRACTION = re.compile(r"^-\d+/\d+$")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harbourne",
        description="Exact linear Harbourne constants of line configurations with at most 10 lines.",
        epilog=f"{NODE_BUDGET_ENV} overrides the default search budget.",
    )
    noise = parser.add_mutually_exclusive_group()
    noise.add_argument("-v", "--verbose", action="count", default=0, help="INFO logging (-vv for DEBUG)")
    noise.add_argument("-q", "--quiet", action="store_true", help="only log errors")
    sub = parser.add_subparsers(dest="command", required=True)

    def search_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--budget", type=int, help="node budget for each search")
        p.add_argument("--jobs", type=int, help="worker processes for the searches")

    p = sub.add_parser("enumerate", help="list the T-vectors for d lines by quotient")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--below", metavar="Q", help="keep q(T) <= Q, e.g. --below -34/15")
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--out")

    p = sub.add_parser("filter", help="run the necessary-condition filters on one T-vector")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-t", required=True, metavar="T2,...,TD")
    p.add_argument("--mode", choices=("absolute", "complex"), default="absolute")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out")

    p = sub.add_parser("feasible", help="decide combinatorial feasibility by exhaustive search")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-t", required=True, metavar="T2,...,TD")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", help="write the witness partition here")
    search_flags(p)

    p = sub.add_parser("realize", help="search PG(2,p) for a configuration with this T-vector")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-t", required=True, metavar="T2,...,TD")
    p.add_argument("--field", required=True, help="prime field, e.g. f2 or f3")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", help="write the certificate here")
    search_flags(p)

    p = sub.add_parser("verify", help="verify a certificate file or a built-in certificate")
    p.add_argument("path", nargs="?")
    p.add_argument("--builtin", metavar="LABEL")
    p.add_argument("--export", metavar="FILE", help="with --builtin, also write the certificate")
    p.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("table", help="compute the table of linear Harbourne constants")
    p.add_argument("--max-d", dest="max_d", type=int, default=10)
    p.add_argument("--mode", choices=("absolute", "complex"), default="absolute")
    p.add_argument("--fields", help=f"comma list of primes from {','.join(map(str, SUPPORTED_PRIMES))}")
    p.add_argument("--audit", action="store_true", help="append every candidate's disposition")
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--out")
    search_flags(p)
    return parser


def resolve_settings(args: argparse.Namespace) -> SearchSettings:
    """Config file and environment first, then per-call flags."""
    base = load_settings()
    overrides = {}
    if getattr(args, "budget", None) is not None:
        overrides["node_budget"] = args.budget
    if getattr(args, "jobs", None) is not None:
        overrides["jobs"] = args.jobs
    if getattr(args, "fields", None):
        overrides["fields"] = args.fields
    if not overrides:
        return base
    return SearchSettings.model_validate(base.model_dump() | overrides)


def join_fraction_values(argv: List[str]) -> List[str]:
    """Rewrite ``--below -34/15`` as ``--below=-34/15``; argparse reads ``-34/15`` as a flag."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        if argv[i] == "--below" and i + 1 < len(argv) and NEGATIVE_FRACTION.match(argv[i + 1]):
            out.append(f"--below={argv[i + 1]}")
            i += 2
            continue
        out.append(argv[i])
        i += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(join_fraction_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as e:
        return int(e.code or 0)

    try:
        settings = resolve_settings(args)
    except ValidationError as e:
        print(f"error: invalid settings: {e.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_USAGE

    if args.verbose:
        level = "DEBUG" if args.verbose > 1 else "INFO"
    elif args.quiet:
        level = "ERROR"
    else:
        level = settings.log_level
    setup_logging(level)
    log.debug("settings: %s", settings.model_dump())

    try:
        return COMMANDS[args.command](args, settings)
    except (UsageError, InvalidDegreeError, InvalidTVectorError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except HarbourneError as e:
        log.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
