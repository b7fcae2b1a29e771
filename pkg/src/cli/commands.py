import argparse
import logging
import sys

from src.core.harbourne.certificates import builtin_certificates
from src.core.harbourne.criteria import (
    Mode,
    apply_all,
    hirzebruch_filter,
    multiplicity_sum_filter,
    parity_profile_filter,
    two_pencils_filter,
)
from src.core.harbourne.errors import (
    CertificateError,
    SearchBudgetExceeded,
    TableIntegrityError,
    UnsupportedFieldError,
)
from src.core.harbourne.exactnum import FieldDescriptor, parse_rational
from src.core.harbourne.geometry import (
    configuration_to_certificate,
    dump_certificate,
    load_certificate,
    realize_over_prime_field,
    verify_certificate,
)
from src.core.harbourne.harbourne_struct import (
    FeasibleResponse,
    FilterResponse,
    Partition,
    RealizeResponse,
    Verdict,
    VerifyResponse,
)
from src.core.harbourne.incidence import feasible_arrangement
from src.core.harbourne.tspace import QuotientValue, TVector, enumerate_tvectors
from src.core.pipeline import compute_table, search_label
from src.utils.constants import (
    EXIT_INCONCLUSIVE,
    EXIT_INTEGRITY,
    EXIT_NEGATIVE,
    EXIT_OK,
    MAX_DEGREE,
)
from src.utils.helpers import SearchSettings

from .formatting import (
    dumps,
    exact_text,
    render_listing,
    render_report,
    render_table,
    render_verdicts,
    report_model,
    write_output,
)

log = logging.getLogger(__name__)


class UsageError(Exception):
    """Bad command-line input detected before any computation (exit 2)."""


def check_degree(d: int) -> None:
    if not 2 <= d <= MAX_DEGREE:
        raise UsageError(f"-d must be between 2 and {MAX_DEGREE}, got {d}")


def parse_tvector(d: int, text: str) -> TVector:
    check_degree(d)
    return TVector.parse(d, text)


def cmd_enumerate(args: argparse.Namespace, settings: SearchSettings) -> int:
    check_degree(args.d)
    below = None
    if args.below is not None:
        try:
            below = QuotientValue(parse_rational(args.below))
        except ValueError as e:
            raise UsageError(f"--below: {e}")
    tvectors = enumerate_tvectors(args.d, below.value if below else None)
    write_output(render_listing(args.d, tvectors, args.format, below), args.out)
    return EXIT_OK


def cmd_filter(args: argparse.Namespace, settings: SearchSettings) -> int:
    tv = parse_tvector(args.d, args.t)
    mode = Mode(args.mode)
    checks = [multiplicity_sum_filter, two_pencils_filter, parity_profile_filter]
    if mode is Mode.COMPLEX:
        checks.append(hirzebruch_filter)
    verdicts = [check(tv) for check in checks]
    overall = apply_all(tv, mode)
    if args.format == "json":
        text = dumps(
            FilterResponse(
                d=tv.d,
                tvector=tv.encode(),
                mode=str(mode),
                verdicts=[Verdict(**v.to_dict()) for v in verdicts],
                overall=Verdict(**overall.to_dict()),
            )
        )
    else:
        text = render_verdicts(verdicts) + f"\n\n{tv.encode()}: {overall.status}"
        if overall.excluded:
            text += f" by {overall.criterion}"
    write_output(text, args.out)
    return EXIT_NEGATIVE if overall.excluded else EXIT_OK


def cmd_feasible(args: argparse.Namespace, settings: SearchSettings) -> int:
    tv = parse_tvector(args.d, args.t)
    try:
        outcome = feasible_arrangement(tv, node_budget=settings.node_budget, jobs=settings.jobs)
    except SearchBudgetExceeded as e:
        print(f"{tv.encode()}: inconclusive (budget exhausted after {e.nodes_explored} nodes)", file=sys.stderr)
        if args.format == "json":
            print(dumps(FeasibleResponse(d=tv.d, tvector=tv.encode(), result="inconclusive", nodes_explored=e.nodes_explored, exhausted=False)))
        return EXIT_INCONCLUSIVE

    witness = Partition(**outcome.witness.to_dict()) if outcome.witness else None
    result = "feasible" if outcome.feasible else "infeasible"
    if args.format == "json":
        print(
            dumps(
                FeasibleResponse(
                    d=tv.d,
                    tvector=tv.encode(),
                    result=result,
                    nodes_explored=outcome.nodes_explored,
                    exhausted=outcome.exhausted,
                    witness=witness,
                )
            )
        )
    else:
        print(f"{tv.encode()}: {result} ({outcome.nodes_explored} nodes, exhausted={str(outcome.exhausted).lower()})")
    if witness is not None:
        if args.out:
            write_output(witness.model_dump_json(indent=2), args.out)
        elif args.format != "json":
            print(witness.model_dump_json())
    return EXIT_OK if outcome.feasible else EXIT_NEGATIVE


def cmd_realize(args: argparse.Namespace, settings: SearchSettings) -> int:
    tv = parse_tvector(args.d, args.t)
    try:
        field = FieldDescriptor.parse(args.field)
    except (ValueError, UnsupportedFieldError) as e:
        raise UsageError(f"--field: {e}")
    if not field.is_finite:
        raise UsageError("--field must name a prime field such as f2 or f3")
    p = field.p
    if tv.d > p * p + p + 1:
        raise UsageError(f"PG(2,{p}) has only {p * p + p + 1} lines, cannot choose d={tv.d}")

    outcome = realize_over_prime_field(tv, p, node_budget=settings.node_budget, jobs=settings.jobs)
    if outcome.configuration is None:
        result = "exhausted" if outcome.exhausted else "inconclusive"
        if args.format == "json":
            print(dumps(RealizeResponse(d=tv.d, tvector=tv.encode(), field=field.tag, result=result, nodes_explored=outcome.nodes_explored, exhausted=outcome.exhausted)))
        else:
            print(f"{tv.encode()} over {field.tag}: not found, {result} ({outcome.nodes_explored} nodes)")
        return EXIT_NEGATIVE if outcome.exhausted else EXIT_INCONCLUSIVE

    cert = configuration_to_certificate(outcome.configuration, search_label(tv, p))
    report = verify_certificate(cert)
    if args.out:
        write_output(dump_certificate(cert), args.out)
        print(f"{tv.encode()} over {field.tag}: found, certificate written to {args.out}", file=sys.stderr)
    if args.format == "json":
        print(dumps(RealizeResponse(d=tv.d, tvector=tv.encode(), field=field.tag, result="found", nodes_explored=outcome.nodes_explored, exhausted=True, certificate=cert)))
    elif not args.out:
        print(dump_certificate(cert))
    log.info("realized %s over %s, H=%s", report.tvector.encode(), field.tag, report.value.exact)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: SearchSettings) -> int:
    if bool(args.path) == bool(args.builtin):
        raise UsageError("verify needs exactly one of PATH or --builtin LABEL")
    try:
        if args.builtin:
            entry = builtin_certificates().get(args.builtin)
            if entry is None:
                raise UsageError(
                    f"unknown built-in certificate {args.builtin!r}; known: {', '.join(builtin_certificates().labels())}"
                )
            cert = entry.certificate
            if args.export:
                write_output(dump_certificate(cert), args.export)
        else:
            cert = load_certificate(args.path)
        report = verify_certificate(cert)
    except CertificateError as e:
        if args.format == "json":
            print(dumps(VerifyResponse(ok=False, error=str(e))))
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_NEGATIVE
    if args.format == "json":
        print(dumps(VerifyResponse(ok=True, report=report_model(report))))
    else:
        print(render_report(report))
    return EXIT_OK


def cmd_table(args: argparse.Namespace, settings: SearchSettings) -> int:
    if not 2 <= args.max_d <= MAX_DEGREE:
        raise UsageError(f"--max-d must be between 2 and {MAX_DEGREE}, got {args.max_d}")
    result = compute_table(
        args.max_d,
        Mode(args.mode),
        settings.fields,
        builtin_certificates(),
        node_budget=settings.node_budget,
        jobs=settings.jobs,
    )
    write_output(render_table(result, args.format, audit=args.audit), args.out)
    try:
        result.check()
    except TableIntegrityError as e:
        for item in e.offending:
            print(f"integrity failure: {item}", file=sys.stderr)
        return EXIT_INTEGRITY
    for row in result.rows:
        log.info("d=%d H=%s", row.d, exact_text(row.value))
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "filter": cmd_filter,
    "feasible": cmd_feasible,
    "realize": cmd_realize,
    "verify": cmd_verify,
    "table": cmd_table,
}
