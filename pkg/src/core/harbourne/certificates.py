"""
Built-in realization certificates.

Every entry carries explicit coordinates and an independently stated
T-vector; the database re-derives each T-vector from the coordinates when it
is built and refuses to load if any entry disagrees.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Mapping, Optional, Sequence

from src.utils.constants import MAX_DEGREE

from .criteria import Mode
from .exactnum import EisensteinRational, FieldDescriptor
from .geometry import LineConfiguration, VerificationReport, configuration_to_certificate, verify_certificate
from .harbourne_struct import Certificate
from .tspace import TVector

log = logging.getLogger(__name__)

Q = FieldDescriptor.rational()
QW = FieldDescriptor.eisenstein()

# minus the cube roots of unity: -1, -w, -w^2 = 1 + w
_MINUS_ROOTS = (EisensteinRational(-1, 0), EisensteinRational(0, -1), EisensteinRational(1, 1))

QUADRILATERAL_6 = [(0, 0, 1), (0, 1, 0), (0, 1, -1), (1, 0, 0), (1, 0, -1), (1, -1, 0)]
QUADRILATERAL_7 = QUADRILATERAL_6 + [(1, 1, -1)]
D8_T4 = QUADRILATERAL_7 + [(0, 2, -1)]
QUADRILATERAL_MINUS_LINE_5 = [(0, 0, 1), (0, 1, 0), (0, 1, -1), (1, 0, 0), (1, 0, -1)]
PENCIL3_PLUS_TWO_5 = [(1, 0, 0), (0, 1, 0), (1, -1, 0), (0, 0, 1), (1, 1, 1)]

# the 9 lines of PG(2,3) missing the point (0:0:1)
PG23_OFF_POINT = [
    (0, 0, 1), (0, 1, 1), (0, 1, 2),
    (1, 0, 1), (1, 0, 2), (1, 1, 1),
    (1, 1, 2), (1, 2, 1), (1, 2, 2),
]  # fmt: skip


def dual_hesse_lines() -> List[tuple]:
    """x - w^i y, y - w^i z, x - w^i z for i = 0, 1, 2."""
    zero, one = QW.zero(), QW.one()
    rows = []
    for r in _MINUS_ROOTS:
        rows.append((one, r, zero))
    for r in _MINUS_ROOTS:
        rows.append((zero, one, r))
    for r in _MINUS_ROOTS:
        rows.append((one, zero, r))
    return rows


def pencil(d: int) -> LineConfiguration:
    """d rational lines through (0:0:1)."""
    return LineConfiguration.from_coords(Q, [(0, 1, 0)] + [(1, i, 0) for i in range(d - 1)])


def general_position(d: int) -> LineConfiguration:
    """d rational lines (1, t, t^2); no three concurrent."""
    return LineConfiguration.from_coords(Q, [(1, t, t * t) for t in range(d)])


def _claim(config: LineConfiguration, label: str, expected: Mapping[int, int]) -> Certificate:
    cert = configuration_to_certificate(config, label)
    cert.claimed_tvector = TVector.from_mapping(config.d, expected).encode()
    return cert


def _certificate(
    label: str, field: FieldDescriptor, rows: Sequence[Sequence[Any]], expected: Mapping[int, int]
) -> Certificate:
    return _claim(LineConfiguration.from_coords(field, rows), label, expected)


def named_certificates() -> List[Certificate]:
    dual_hesse = dual_hesse_lines()
    return [
        _certificate("quadrilateral-6", Q, QUADRILATERAL_6, {3: 4, 2: 3}),
        _certificate("quadrilateral-7", Q, QUADRILATERAL_7, {3: 6, 2: 3}),
        _certificate("d8-t4-config", Q, D8_T4, {4: 1, 3: 6, 2: 4}),
        _certificate("fano-f2", FieldDescriptor.prime(2), [
            (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1),
        ], {3: 7}),  # fmt: skip
        _certificate("pg23-minus-pencil4", FieldDescriptor.prime(3), PG23_OFF_POINT, {3: 12}),
        _certificate("pg23-minus-pencil3", FieldDescriptor.prime(3), PG23_OFF_POINT + [(1, 2, 0)], {4: 3, 3: 9}),
        _certificate("dual-hesse-eisenstein", QW, dual_hesse, {3: 12}),
        _certificate("dual-hesse-plus-line", QW, dual_hesse + [(QW.zero(), QW.zero(), QW.one())], {4: 2, 3: 10, 2: 3}),
        _certificate("quadrilateral-minus-line-5", Q, QUADRILATERAL_MINUS_LINE_5, {3: 2, 2: 4}),
        _certificate("pencil3-plus-two-5", Q, PENCIL3_PLUS_TWO_5, {3: 1, 2: 7}),
        _certificate("dual-hesse-minus-line", QW, dual_hesse[1:], {3: 8, 2: 4}),
    ]


def generated_certificates(max_d: int = MAX_DEGREE) -> List[Certificate]:
    out = []
    for d in range(2, max_d + 1):
        out.append(_claim(pencil(d), f"pencil-{d}", {d: 1}))
    for d in range(2, max_d + 1):
        out.append(_claim(general_position(d), f"general-{d}", {2: d * (d - 1) // 2}))
    return out


@dataclass(slots=True)
class CertificateEntry:
    certificate: Certificate
    report: VerificationReport

    @property
    def label(self) -> str:
        return self.certificate.label

    @property
    def characteristic(self) -> int:
        return self.report.field.characteristic


@dataclass(slots=True)
class CertificateDatabase:
    entries: Dict[str, CertificateEntry] = field(default_factory=dict)

    def add(self, cert: Certificate) -> CertificateEntry:
        if cert.label in self.entries:
            raise ValueError(f"duplicate certificate label {cert.label!r}")
        entry = CertificateEntry(cert, verify_certificate(cert))
        self.entries[cert.label] = entry
        return entry

    def labels(self) -> List[str]:
        return list(self.entries)

    def get(self, label: str) -> Optional[CertificateEntry]:
        return self.entries.get(label)

    def lookup(self, tv: TVector, mode: Mode = Mode.ABSOLUTE) -> List[CertificateEntry]:
        """Entries realizing exactly T; complex mode keeps characteristic 0 only."""
        return [
            e for e in self.entries.values()
            if e.report.tvector == tv and (Mode(mode) is Mode.ABSOLUTE or e.characteristic == 0)
        ]  # fmt: skip

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, label: object) -> bool:
        return label in self.entries


@lru_cache(maxsize=1)
def builtin_certificates() -> CertificateDatabase:
    """
    Build and verify the certificate database.

    Returns:
        CertificateDatabase: pencil-d and general-d for 2 <= d <= 10 plus the
        named constructions.

    Raises:
        CertificateError: If any entry fails verification.
    """
    db = CertificateDatabase()
    for cert in generated_certificates() + named_certificates():
        db.add(cert)
    log.info("loaded %d built-in certificates", len(db))
    return db
