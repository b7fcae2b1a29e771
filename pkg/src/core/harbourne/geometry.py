"""
Explicit line configurations over Q, Q(w) and the prime fields: exact
intersection points, T-vectors, Harbourne values, finite-plane realization
search and certificate verification.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, lcm
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from src.utils.constants import DEFAULT_NODE_BUDGET

from .errors import (
    CertificateError,
    InvalidConfigurationError,
    InvalidDegreeError,
    InvalidTVectorError,
    UnsupportedFieldError,
)
from .exactnum import FieldDescriptor, PrimeFieldElement, Scalar, decode_scalar, descriptor_of, encode_scalar
from .harbourne_struct import (
    Certificate,
    EisensteinFieldSpec,
    PrimeFieldSpec,
)
from .incidence import CliquePartition
from .tspace import QuotientValue, TVector, combinatorial_quotient

log = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class ProjTriple:
    """Homogeneous coordinates (a : b : c), always stored normalized."""

    coords: Tuple[Scalar, Scalar, Scalar]

    @classmethod
    def of(cls, field: FieldDescriptor, coords: Sequence[Any]) -> "ProjTriple":
        """
        Normalize a coordinate triple.

        Finite fields and Q(w) scale the first nonzero entry to 1; over Q the
        entries become coprime integers with a positive leading entry.

        Raises:
            InvalidConfigurationError: If all three coordinates are zero.
        """
        if len(coords) != 3:
            raise InvalidConfigurationError(f"expected 3 coordinates, got {len(coords)}")
        values = [c if field.contains(c) else field.coerce(c) for c in coords]
        lead = next((c for c in values if c), None)
        if lead is None:
            raise InvalidConfigurationError("the zero triple is not a projective point")
        if field.kind == "rational":
            fracs = [Fraction(c) for c in values]
            scale = lcm(*(f.denominator for f in fracs))
            ints = [int(f * scale) for f in fracs]
            g = gcd(*ints)
            sign = -1 if next(i for i in ints if i) < 0 else 1
            return cls(tuple(Fraction(sign * i // g) for i in ints))
        inv = lead.inverse()
        return cls(tuple(c * inv for c in values))

    @property
    def field(self) -> FieldDescriptor:
        return descriptor_of(self.coords[0])

    def encode(self) -> List[Any]:
        return [encode_scalar(c) for c in self.coords]

    def __str__(self) -> str:
        return "(" + " : ".join(str(encode_scalar(c)) for c in self.coords) + ")"


def dot(u: ProjTriple, v: ProjTriple) -> Scalar:
    a, b = u.coords, v.coords
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(u: ProjTriple, v: ProjTriple) -> ProjTriple:
    """Meet of two lines, or join of two points."""
    a, b = u.coords, v.coords
    return ProjTriple.of(
        u.field,
        (
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ),
    )


def _plane_triples(p: int) -> List[ProjTriple]:
    FieldDescriptor.prime(p)
    out = []
    for raw in product(range(p), repeat=3):
        first = next((x for x in raw if x), None)
        if first == 1:
            out.append(ProjTriple(tuple(PrimeFieldElement(x, p) for x in raw)))
    return out


@lru_cache(maxsize=None)
def plane_points(p: int) -> Tuple[ProjTriple, ...]:
    """All p^2 + p + 1 points of PG(2, p) in lexicographic residue order."""
    return tuple(_plane_triples(p))


@lru_cache(maxsize=None)
def plane_lines(p: int) -> Tuple[ProjTriple, ...]:
    """
    All p^2 + p + 1 lines of PG(2, p) in lexicographic residue order.

    Args:
        p (int): A supported prime.

    Returns:
        Tuple[ProjTriple, ...]: Normalized line coordinates.

    Raises:
        UnsupportedFieldError: If p is not in the supported set.
    """
    lines = tuple(_plane_triples(p))
    points = plane_points(p)
    assert len(lines) == len(points) == p * p + p + 1
    for pt in points:
        assert sum(1 for ln in lines if not dot(ln, pt)) == p + 1
    return lines


@lru_cache(maxsize=None)
def _points_on_lines(p: int) -> Tuple[Tuple[int, ...], ...]:
    points = plane_points(p)
    return tuple(
        tuple(i for i, pt in enumerate(points) if not dot(ln, pt)) for ln in plane_lines(p)
    )


class LineConfiguration:
    """Distinct lines over one field, with their derived singular points."""

    def __init__(self, field: FieldDescriptor, lines: Sequence[ProjTriple]) -> None:
        self.field = field
        self.lines = list(lines)
        if len(self.lines) < 2:
            raise InvalidConfigurationError("a configuration needs at least 2 lines")
        seen: Dict[ProjTriple, int] = {}
        for idx, line in enumerate(self.lines):
            if line.field != field:
                raise InvalidConfigurationError(f"line {idx} is over {line.field}, not {field}")
            if line in seen:
                raise InvalidConfigurationError(f"line {idx} duplicates line {seen[line]}: {line}")
            seen[line] = idx

    @classmethod
    def from_coords(cls, field: FieldDescriptor, rows: Sequence[Sequence[Any]]) -> "LineConfiguration":
        return cls(field, [ProjTriple.of(field, row) for row in rows])

    @property
    def d(self) -> int:
        return len(self.lines)

    @cached_property
    def points(self) -> Dict[ProjTriple, List[int]]:
        """Singular point -> sorted indices of the lines through it."""
        found: Dict[ProjTriple, set] = {}
        for i in range(self.d):
            for j in range(i + 1, self.d):
                pt = cross(self.lines[i], self.lines[j])
                found.setdefault(pt, set()).update((i, j))
        return {pt: sorted(members) for pt, members in found.items()}

    def singular_points(self) -> Dict[ProjTriple, int]:
        return {pt: len(members) for pt, members in self.points.items()}

    @property
    def s(self) -> int:
        return len(self.points)

    def clique_partition(self) -> CliquePartition:
        return CliquePartition(self.d, [list(m) for m in self.points.values()])

    def tvector(self) -> TVector:
        counts = [0] * (self.d - 1)
        for members in self.points.values():
            counts[len(members) - 2] += 1
        return TVector(self.d, tuple(counts))


def tvector_of_configuration(config: LineConfiguration) -> TVector:
    return config.tvector()


def harbourne_value(config: LineConfiguration) -> Fraction:
    """(d^2 - sum m(P)^2) / s, computed from the points themselves."""
    total = sum(len(m) ** 2 for m in config.points.values())
    return Fraction(config.d**2 - total, config.s)


@dataclass(slots=True)
class RealizationOutcome:
    configuration: Optional[LineConfiguration]
    exhausted: bool
    nodes_explored: int

    @property
    def found(self) -> bool:
        return self.configuration is not None


class _SubsetSearch:
    def __init__(self, tv: TVector, p: int, node_budget: int) -> None:
        self.d = tv.d
        self.n = p * p + p + 1
        self.on_line = _points_on_lines(p)
        self.mult = [0] * self.n
        self.ge = [0] * (tv.d + 2)
        # cap[m]: points of multiplicity >= m allowed by T
        self.cap = [sum(tv.t(k) for k in range(m, tv.d + 1)) for m in range(tv.d + 2)]
        self.chosen: List[int] = []
        self.nodes = 0
        self.budget = node_budget

    def _add(self, line: int) -> bool:
        ok = True
        for pt in self.on_line[line]:
            self.mult[pt] += 1
            m = self.mult[pt]
            if m >= 2:
                self.ge[m] += 1
                if self.ge[m] > self.cap[m]:
                    ok = False
        self.chosen.append(line)
        return ok

    def _remove(self, line: int) -> None:
        self.chosen.pop()
        for pt in self.on_line[line]:
            m = self.mult[pt]
            if m >= 2:
                self.ge[m] -= 1
            self.mult[pt] -= 1

    def _complete(self) -> bool:
        return all(self.ge[m] == self.cap[m] for m in range(2, self.d + 1))

    def descend(self, start: int) -> bool:
        if len(self.chosen) == self.d:
            return self._complete()
        last = self.n - (self.d - len(self.chosen))
        for line in range(start, last + 1):
            self.nodes += 1
            if self.nodes > self.budget:
                return False
            if self._add(line) and self.descend(line + 1):
                return True
            self._remove(line)
        return False

    @property
    def over_budget(self) -> bool:
        return self.nodes > self.budget


def _realize_branch(args: Tuple[TVector, int, int, int]) -> Tuple[Optional[List[int]], bool, int]:
    tv, p, first, budget = args
    search = _SubsetSearch(tv, p, budget)
    search.nodes = 1
    found = search._add(first) and search.descend(first + 1)
    return (list(search.chosen) if found else None), not search.over_budget, search.nodes


def realize_over_prime_field(
    tv: TVector, p: int, node_budget: int = DEFAULT_NODE_BUDGET, jobs: int = 1
) -> RealizationOutcome:
    """
    Look for d lines of PG(2, p) whose intersection histogram is exactly T.

    Subsets are visited in lexicographic order of line indices; a branch is
    cut as soon as, for some m, more points of multiplicity >= m exist than
    T allows.

    Args:
        tv (TVector): Target histogram.
        p (int): Supported prime.
        node_budget (int): Maximum number of line insertions tried.
        jobs (int): Worker processes, split over the first line.

    Returns:
        RealizationOutcome: The first configuration found, or None with
        ``exhausted`` telling whether the absence is proven.

    Raises:
        ValueError: If d exceeds the number of lines of the plane.
    """
    tv.validate()
    field = FieldDescriptor.prime(p)
    lines = plane_lines(p)
    if tv.d > len(lines):
        raise ValueError(f"PG(2,{p}) has only {len(lines)} lines, cannot choose {tv.d}")
    log.info("realization search d=%d T=%s over %s budget=%d", tv.d, tv.encode(), field, node_budget)

    if jobs <= 1:
        search = _SubsetSearch(tv, p, node_budget)
        found = search.descend(0)
        chosen = list(search.chosen) if found else None
        exhausted, nodes = not search.over_budget, search.nodes
    else:
        firsts = range(len(lines) - tv.d + 1)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_realize_branch, [(tv, p, f, node_budget) for f in firsts]))
        chosen, exhausted, nodes = None, True, 0
        for hit, done, explored in results:
            nodes += explored
            if hit is not None and chosen is None:
                chosen = hit
            exhausted = exhausted and done

    if chosen is None:
        if exhausted:
            log.info("realization search T=%s over %s: none after %d nodes", tv.encode(), field, nodes)
        else:
            log.warning("realization search T=%s over %s: budget of %d nodes exhausted", tv.encode(), field, node_budget)
        return RealizationOutcome(None, exhausted, nodes)
    config = LineConfiguration(field, [lines[i] for i in chosen])
    log.info("realization search T=%s over %s: found after %d nodes", tv.encode(), field, nodes)
    return RealizationOutcome(config, True, nodes)


@dataclass(slots=True)
class VerificationReport:
    label: str
    field: FieldDescriptor
    d: int
    s: int
    tvector: TVector
    value: QuotientValue

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "field": self.field.tag,
            "d": self.d,
            "s": self.s,
            "tvector": self.tvector.encode(),
            "h": self.value.exact,
            "decimal": self.value.decimal,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def field_of_certificate(cert: Certificate) -> FieldDescriptor:
    spec = cert.field
    if isinstance(spec, PrimeFieldSpec):
        try:
            return FieldDescriptor.prime(spec.p)
        except (ValueError, UnsupportedFieldError) as e:
            raise CertificateError(str(e), path="field.p")
    if isinstance(spec, EisensteinFieldSpec):
        return FieldDescriptor.eisenstein()
    return FieldDescriptor.rational()


def certificate_configuration(cert: Certificate) -> LineConfiguration:
    """Decode a certificate's lines into a configuration, naming the JSON path of any defect."""
    field = field_of_certificate(cert)
    triples: List[ProjTriple] = []
    seen: Dict[ProjTriple, int] = {}
    for i, row in enumerate(cert.lines):
        if len(row) != 3:
            raise CertificateError(f"expected 3 coordinates, got {len(row)}", path=f"lines[{i}]")
        values = []
        for j, raw in enumerate(row):
            try:
                values.append(decode_scalar(raw, field))
            except ValueError as e:
                raise CertificateError(str(e), path=f"lines[{i}][{j}]")
        try:
            triple = ProjTriple.of(field, values)
        except InvalidConfigurationError as e:
            raise CertificateError(str(e), path=f"lines[{i}]")
        if triple in seen:
            raise CertificateError(f"duplicate of lines[{seen[triple]}]", path=f"lines[{i}]")
        seen[triple] = i
        triples.append(triple)
    try:
        return LineConfiguration(field, triples)
    except InvalidConfigurationError as e:
        raise CertificateError(str(e), path="lines")


def verify_certificate(cert: Certificate) -> VerificationReport:
    """
    Rebuild the configuration from coordinates and compute T, s and H.

    The claimed T-vector, if present, is only compared against, never used.

    Raises:
        CertificateError: On malformed scalars, zero or duplicate lines, or a
            claimed T-vector that disagrees with the computed one.
    """
    config = certificate_configuration(cert)
    tv = config.tvector()
    if cert.claimed_tvector is not None:
        try:
            claimed = TVector.parse(config.d, cert.claimed_tvector)
        except (InvalidDegreeError, InvalidTVectorError) as e:
            raise CertificateError(str(e), path="claimed_tvector")
        if claimed != tv:
            raise CertificateError(
                f"claimed {claimed.encode()} but the lines give {tv.encode()}", path="claimed_tvector"
            )
    value = combinatorial_quotient(tv)
    assert value.value == harbourne_value(config)
    return VerificationReport(cert.label, config.field, config.d, config.s, tv, value)


def configuration_to_certificate(config: LineConfiguration, label: str) -> Certificate:
    return Certificate.model_validate(
        {
            "label": label,
            "field": config.field.to_wire(),
            "lines": [line.encode() for line in config.lines],
            "claimed_tvector": config.tvector().encode(),
        }
    )


def _format_loc(loc: Tuple[Any, ...]) -> str:
    out = ""
    for part in loc:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out


def parse_certificate(data: Any) -> Certificate:
    try:
        return Certificate.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise CertificateError(first["msg"], path=_format_loc(first["loc"]) or "$")


def load_certificate(path: str | Path) -> Certificate:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CertificateError(f"cannot read certificate: {e.strerror}", path=str(path))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateError(f"invalid JSON at line {e.lineno} column {e.colno}", path="$")
    return parse_certificate(data)


def dump_certificate(cert: Certificate) -> str:
    return cert.dump()
