import json
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

from pydantic import BaseModel
from tabulate import tabulate

from src.core.harbourne.criteria import ExclusionVerdict
from src.core.harbourne.geometry import VerificationReport
from src.core.harbourne.harbourne_struct import (
    CandidateRecord,
    EnumerateResponse,
    Report,
    TableResponse,
    TableRowRecord,
    TVectorRecord,
)
from src.core.harbourne.tspace import QuotientValue, TVector, combinatorial_quotient
from src.core.pipeline import CandidateStatus, TableResult
from src.utils.csvhandle import audit_df, listing_df, table_df, to_csv_text


def exact_text(q: QuotientValue) -> str:
    """``-29/12 (-2.416667)``"""
    return f"{q.exact} ({q.decimal})"


def dumps(model: BaseModel) -> str:
    return json.dumps(model.model_dump(exclude_none=True), indent=2)


def write_output(text: str, out: Optional[str | Path]) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def render_listing(d: int, tvectors: Sequence[TVector], fmt: str, below: Optional[QuotientValue] = None) -> str:
    if fmt == "json":
        records = []
        for tv in tvectors:
            q = combinatorial_quotient(tv)
            records.append(TVectorRecord(tvector=tv.encode(), q=q.exact, decimal=q.decimal, mixed=q.mixed))
        return dumps(EnumerateResponse(d=d, below=below.exact if below else None, tvectors=records))
    if fmt == "csv":
        return to_csv_text(listing_df(tvectors))
    rows = [(tv.encode(), exact_text(combinatorial_quotient(tv))) for tv in tvectors]
    return tabulate(rows, headers=["T", "q(T)"], tablefmt="pretty", colalign=("left", "right"))


def render_verdicts(verdicts: Iterable[ExclusionVerdict]) -> str:
    rows = [(v.criterion or "-", v.status, v.detail) for v in verdicts]
    return tabulate(rows, headers=["criterion", "status", "detail"], tablefmt="plain")


def render_report(report: VerificationReport) -> str:
    rows = [
        ("label", report.label),
        ("field", report.field.tag),
        ("d", report.d),
        ("s", report.s),
        ("T", report.tvector.encode()),
        ("H", exact_text(report.value)),
    ]
    return tabulate(rows, tablefmt="plain")


def report_model(report: VerificationReport) -> Report:
    return Report(**report.to_dict())


def candidate_record(status: CandidateStatus) -> CandidateRecord:
    return CandidateRecord(**status.to_dict())


def table_response(result: TableResult, audit: bool) -> TableResponse:
    rows: List[TableRowRecord] = []
    for row in result.rows:
        data = row.to_dict(audit=False)
        rows.append(
            TableRowRecord(
                **data,
                audit=[candidate_record(c) for c in row.audit] if audit else None,
            )
        )
    return TableResponse(mode=str(result.mode), fields=result.fields, integrity_ok=result.integrity_ok, rows=rows)


def render_table(result: TableResult, fmt: str, audit: bool = False) -> str:
    if fmt == "json":
        return dumps(table_response(result, audit))
    if fmt == "csv":
        text = to_csv_text(table_df(result))
        if audit:
            text += "\n" + to_csv_text(audit_df(result))
        return text
    rows = []
    for r in result.rows:
        value = exact_text(r.value) if r.value else "?"
        rows.append((r.d, value, r.value.mixed if r.value else "", r.witness or "", "ok" if r.integrity_ok else "FAILED"))
    text = f"linear Harbourne constants ({result.mode})\n"
    text += tabulate(rows, headers=["d", "H", "mixed", "witness", "integrity"], tablefmt="pretty")
    if audit:
        audit_rows = [
            (r.d, c.tvector.short(), exact_text(c.q), c.status, c.criterion or c.certificate or "", c.detail)
            for r in result.rows
            for c in r.audit
        ]
        text += "\n\n" + tabulate(
            audit_rows, headers=["d", "T", "q(T)", "status", "by", "detail"], tablefmt="pretty", colalign=("right", "left")
        )
    return text
