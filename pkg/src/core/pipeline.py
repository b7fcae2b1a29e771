import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, TypedDict

from src.core.harbourne.certificates import CertificateDatabase, builtin_certificates
from src.core.harbourne.criteria import Mode, apply_all
from src.core.harbourne.errors import SearchBudgetExceeded, TableIntegrityError
from src.core.harbourne.geometry import configuration_to_certificate, realize_over_prime_field, verify_certificate
from src.core.harbourne.harbourne_struct import Certificate
from src.core.harbourne.incidence import feasible_arrangement
from src.core.harbourne.tspace import QuotientValue, TVector, combinatorial_quotient, enumerate_tvectors
from src.utils.constants import DEFAULT_FIELDS, DEFAULT_NODE_BUDGET, MAX_DEGREE

log = logging.getLogger(__name__)

EXCLUDED = "excluded"
INFEASIBLE = "combinatorially_infeasible"
REALIZED = "realized"
INCONCLUSIVE = "inconclusive"


class CandidateDict(TypedDict, total=False):
    tvector: str
    q: str
    decimal: str
    status: str
    criterion: str
    certificate: str
    field: str
    detail: str
    nodes_explored: int


@dataclass(slots=True)
class CandidateStatus:
    tvector: TVector
    q: QuotientValue
    status: str
    criterion: Optional[str] = None
    certificate: Optional[str] = None
    field: Optional[str] = None
    detail: str = ""
    nodes_explored: Optional[int] = None
    evidence: Optional[Certificate] = None

    def to_dict(self) -> CandidateDict:
        out: CandidateDict = {
            "tvector": self.tvector.encode(),
            "q": self.q.exact,
            "decimal": self.q.decimal,
            "status": self.status,
        }
        if self.criterion is not None:
            out["criterion"] = self.criterion
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.field is not None:
            out["field"] = self.field
        if self.detail:
            out["detail"] = self.detail
        if self.nodes_explored is not None:
            out["nodes_explored"] = self.nodes_explored
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def search_label(tv: TVector, p: int) -> str:
    return f"search-f{p}-d{tv.d}-{tv.encode().replace(',', '.')}"


def classify_candidate(
    tv: TVector,
    mode: Mode = Mode.ABSOLUTE,
    fields: Sequence[int] = DEFAULT_FIELDS,
    db: Optional[CertificateDatabase] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
) -> CandidateStatus:
    """
    Decide what is known about one T-vector.

    Filters run first, then the incidence search, then the certificate
    database, then (absolute mode only) the finite-plane search over
    ``fields``. A combinatorially feasible T with no realization found is
    inconclusive, as is any exhausted budget.

    Args:
        tv (TVector): The candidate.
        mode (Mode): absolute or complex.
        fields (Sequence[int]): Primes searched in absolute mode.
        db (Optional[CertificateDatabase]): Defaults to the built-in database.
        node_budget (int): Budget for each search.
        jobs (int): Worker processes for each search.

    Returns:
        CandidateStatus: excluded, combinatorially_infeasible, realized or inconclusive.
    """
    mode = Mode(mode)
    db = db if db is not None else builtin_certificates()
    q = combinatorial_quotient(tv)

    verdict = apply_all(tv, mode)
    if verdict.excluded:
        return CandidateStatus(tv, q, EXCLUDED, verdict.criterion, detail=verdict.detail)

    try:
        outcome = feasible_arrangement(tv, node_budget=node_budget, jobs=jobs)
    except SearchBudgetExceeded as e:
        return CandidateStatus(
            tv, q, INCONCLUSIVE, detail=f"incidence search budget exhausted after {e.nodes_explored} nodes",
            nodes_explored=e.nodes_explored,
        )
    if not outcome.feasible:
        return CandidateStatus(
            tv, q, INFEASIBLE, detail="no clique partition of K_d has this histogram",
            nodes_explored=outcome.nodes_explored,
        )

    hits = db.lookup(tv, mode)
    if hits:
        first = hits[0]
        detail = "also: " + ", ".join(h.label for h in hits[1:]) if len(hits) > 1 else ""
        return CandidateStatus(
            tv, q, REALIZED, certificate=first.label, field=first.report.field.tag,
            detail=detail, evidence=first.certificate,
        )

    notes: List[str] = []
    if mode is Mode.ABSOLUTE:
        for p in fields:
            if tv.d > p * p + p + 1:
                continue
            found = realize_over_prime_field(tv, p, node_budget=node_budget, jobs=jobs)
            if found.configuration is not None:
                cert = configuration_to_certificate(found.configuration, search_label(tv, p))
                report = verify_certificate(cert)
                assert report.tvector == tv
                return CandidateStatus(
                    tv, q, REALIZED, certificate=cert.label, field=report.field.tag,
                    detail=f"found by search after {found.nodes_explored} nodes",
                    nodes_explored=found.nodes_explored, evidence=cert,
                )
            notes.append(f"F{p}: {'exhausted' if found.exhausted else 'budget exhausted'}")

    detail = "combinatorially feasible, no realization known"
    if notes:
        detail += " (" + "; ".join(notes) + ")"
    return CandidateStatus(tv, q, INCONCLUSIVE, detail=detail, nodes_explored=outcome.nodes_explored)


@dataclass(slots=True)
class TableRow:
    d: int
    mode: Mode
    value: Optional[QuotientValue] = None
    witness: Optional[str] = None
    audit: List[CandidateStatus] = field(default_factory=list)
    integrity_ok: bool = True

    def offending(self) -> List[CandidateStatus]:
        if self.value is None:
            return [c for c in self.audit if c.status == INCONCLUSIVE]
        return [c for c in self.audit if c.status == INCONCLUSIVE and c.q.value < self.value.value]

    def to_dict(self, audit: bool = False) -> dict:
        out = {
            "d": self.d,
            "mode": str(self.mode),
            "value": self.value.exact if self.value else None,
            "decimal": self.value.decimal if self.value else None,
            "mixed": self.value.mixed if self.value else None,
            "witness": self.witness,
            "integrity_ok": self.integrity_ok,
        }
        if audit:
            out["audit"] = [c.to_dict() for c in self.audit]
        return out


@dataclass(slots=True)
class TableResult:
    mode: Mode
    fields: List[int]
    rows: List[TableRow] = field(default_factory=list)

    @property
    def integrity_ok(self) -> bool:
        return all(r.integrity_ok for r in self.rows)

    def values(self) -> Dict[int, Optional[Fraction]]:
        return {r.d: (r.value.value if r.value else None) for r in self.rows}

    def check(self) -> None:
        """Raises TableIntegrityError naming every undecided candidate below a row value."""
        bad = [f"d={r.d} T={c.tvector.encode()}" for r in self.rows if not r.integrity_ok for c in r.offending()]
        missing = [f"d={r.d}: no realized candidate" for r in self.rows if r.value is None]
        if bad or missing:
            raise TableIntegrityError("table integrity violated: " + ", ".join(bad + missing), offending=bad + missing)


def compute_row(
    d: int,
    mode: Mode = Mode.ABSOLUTE,
    fields: Sequence[int] = DEFAULT_FIELDS,
    db: Optional[CertificateDatabase] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
) -> TableRow:
    """
    Walk the candidates for d in ascending quotient order up to the first
    realized value, then finish the remaining ties at that value.
    """
    mode = Mode(mode)
    db = db if db is not None else builtin_certificates()
    row = TableRow(d, mode)
    for tv in enumerate_tvectors(d):
        q = combinatorial_quotient(tv)
        if row.value is not None and q.value > row.value.value:
            break
        status = classify_candidate(tv, mode, fields, db, node_budget, jobs)
        log.debug("d=%d %s q=%s: %s %s", d, tv.encode(), q.exact, status.status, status.criterion or status.certificate or "")
        row.audit.append(status)
        if status.status == REALIZED and row.value is None:
            row.value, row.witness = q, status.certificate
    row.integrity_ok = row.value is not None and not row.offending()
    log.info(
        "%s d=%d: H=%s witness=%s candidates=%d integrity=%s",
        mode, d, row.value.exact if row.value else None, row.witness, len(row.audit), row.integrity_ok,
    )
    return row


def compute_table(
    max_d: int = MAX_DEGREE,
    mode: Mode = Mode.ABSOLUTE,
    fields: Sequence[int] = DEFAULT_FIELDS,
    db: Optional[CertificateDatabase] = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
    min_d: int = 2,
) -> TableResult:
    """
    Linear Harbourne constants for d = min_d..max_d.

    Args:
        max_d (int): Largest number of lines, at most 10.
        mode (Mode): absolute (any field) or complex (characteristic 0).
        fields (Sequence[int]): Primes searched in absolute mode.
        db (Optional[CertificateDatabase]): Defaults to the built-in database.
        node_budget (int): Budget for every search.
        jobs (int): Worker processes for every search.
        min_d (int): Smallest number of lines.

    Returns:
        TableResult: One row per d; call ``check()`` to enforce integrity.
    """
    if not 2 <= min_d <= max_d:
        raise ValueError(f"need 2 <= min_d <= max_d, got {min_d}..{max_d}")
    if max_d > MAX_DEGREE:
        log.warning("max_d=%d is beyond the supported range; rows above %d may be slow or inconclusive", max_d, MAX_DEGREE)
    db = db if db is not None else builtin_certificates()
    result = TableResult(Mode(mode), list(fields))
    for d in range(min_d, max_d + 1):
        result.rows.append(compute_row(d, mode, fields, db, node_budget, jobs))
    return result
