import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import List, Mapping, Optional, Tuple

from src.utils.constants import DECIMAL_PLACES, MAX_DEGREE

from .errors import InvalidDegreeError, InvalidTVectorError
from .exactnum import format_rational

log = logging.getLogger(__name__)


def render_decimal(value: Fraction, places: int = DECIMAL_PLACES) -> str:
    """Round half away from zero to ``places`` digits, exactly."""
    scaled = abs(value) * 10**places
    digits = int(scaled)
    if scaled - digits >= Fraction(1, 2):
        digits += 1
    sign = "-" if value < 0 and digits else ""
    whole, frac = divmod(digits, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def render_mixed(value: Fraction) -> str:
    """``-29/12`` -> ``-2 5/12``; integers render bare."""
    sign = "-" if value < 0 else ""
    whole, rest = divmod(abs(value.numerator), value.denominator)
    if not rest:
        return f"{sign}{whole}"
    if not whole:
        return f"{sign}{rest}/{value.denominator}"
    return f"{sign}{whole} {rest}/{value.denominator}"


@dataclass(frozen=True, slots=True)
class QuotientValue:
    value: Fraction

    @property
    def decimal(self) -> str:
        return render_decimal(self.value)

    @property
    def mixed(self) -> str:
        return render_mixed(self.value)

    @property
    def exact(self) -> str:
        return format_rational(self.value)

    def __str__(self) -> str:
        return f"{self.exact} ({self.decimal})"


@dataclass(frozen=True, slots=True)
class TVector:
    """Point-multiplicity histogram (t_2, ..., t_d) of a would-be arrangement of d lines."""

    d: int
    counts: Tuple[int, ...]

    def t(self, k: int) -> int:
        if 2 <= k <= self.d:
            return self.counts[k - 2]
        return 0

    @property
    def s(self) -> int:
        return sum(self.counts)

    @property
    def incidences(self) -> int:
        return sum(k * c for k, c in self.items())

    def items(self) -> List[Tuple[int, int]]:
        return [(k, c) for k, c in enumerate(self.counts, start=2)]

    def multiplicities(self) -> List[int]:
        """Every point multiplicity, largest first."""
        out: List[int] = []
        for k in range(self.d, 1, -1):
            out.extend([k] * self.t(k))
        return out

    def encode(self) -> str:
        return ",".join(str(c) for c in self.counts)

    def short(self) -> str:
        """Compact form without trailing zeros, e.g. ``(0,9,3)``."""
        counts = list(self.counts)
        while len(counts) > 1 and counts[-1] == 0:
            counts.pop()
        return "(" + ",".join(map(str, counts)) + ")"

    @classmethod
    def parse(cls, d: int, text: str) -> "TVector":
        parts = [p.strip() for p in text.split(",")]
        try:
            counts = tuple(int(p) for p in parts)
        except ValueError:
            raise InvalidTVectorError(f"T-vector {text!r} is not a comma-separated list of integers")
        tv = cls(d, counts)
        tv.validate()
        return tv

    @classmethod
    def from_mapping(cls, d: int, mapping: Mapping[int, int]) -> "TVector":
        for k in mapping:
            if not 2 <= k <= d:
                raise InvalidTVectorError(f"multiplicity {k} outside [2, {d}]")
        tv = cls(d, tuple(mapping.get(k, 0) for k in range(2, d + 1)))
        tv.validate()
        return tv

    def imbalance(self) -> int:
        """sum t_k C(k,2) - C(d,2); zero for a valid vector."""
        return sum(c * comb(k, 2) for k, c in self.items()) - comb(self.d, 2)

    def validate(self) -> None:
        """
        Check shape, signs and the pair-count identity.

        Raises:
            InvalidDegreeError: If d < 2.
            InvalidTVectorError: If the vector is malformed; carries the imbalance
                when only the identity fails.
        """
        if self.d < 2:
            raise InvalidDegreeError(f"d must be at least 2, got {self.d}")
        if len(self.counts) != self.d - 1:
            raise InvalidTVectorError(
                f"expected {self.d - 1} entries (t_2..t_{self.d}), got {len(self.counts)}"
            )
        if any(c < 0 for c in self.counts):
            raise InvalidTVectorError(f"negative entry in {self.encode()}")
        diff = self.imbalance()
        if diff:
            raise InvalidTVectorError(
                f"sum t_k*C(k,2) = {diff + comb(self.d, 2)} but C({self.d},2) = {comb(self.d, 2)}"
                f" (imbalance {diff:+d})",
                imbalance=diff,
            )

    def __str__(self) -> str:
        return self.encode()


def check_combinatorial_identity(tv: TVector) -> bool:
    return len(tv.counts) == tv.d - 1 and tv.imbalance() == 0


def combinatorial_quotient(tv: TVector) -> QuotientValue:
    """
    Exact quotient (d^2 - sum k^2 t_k) / s.

    Args:
        tv (TVector): A valid T-vector (s >= 1).

    Returns:
        QuotientValue: The reduced rational with its renderings.
    """
    return QuotientValue(Fraction(tv.d**2 - sum(k * k * c for k, c in tv.items()), tv.s))


def sort_key(tv: TVector) -> Tuple[Fraction, Tuple[int, ...]]:
    return combinatorial_quotient(tv).value, tuple(-c for c in reversed(tv.counts))


def enumerate_tvectors(d: int, q_ceiling: Optional[Fraction] = None) -> List[TVector]:
    """
    List every non-negative solution of sum t_k C(k,2) = C(d,2).

    The result is ordered by quotient ascending, ties broken by (t_d, ..., t_2)
    descending.

    Args:
        d (int): Number of lines, at least 2.
        q_ceiling (Optional[Fraction]): Keep only vectors with quotient <= q_ceiling.

    Returns:
        List[TVector]: The ordered solutions.

    Raises:
        InvalidDegreeError: If d < 2.
    """
    if d < 2:
        raise InvalidDegreeError(f"d must be at least 2, got {d}")
    if d > MAX_DEGREE:
        log.warning("d=%d is beyond the supported range 2..%d; enumeration may be slow", d, MAX_DEGREE)

    found: List[TVector] = []
    counts = [0] * (d - 1)

    def descend(k: int, remaining: int) -> None:
        if k == 2:
            counts[0] = remaining
            found.append(TVector(d, tuple(counts)))
            return
        pairs = comb(k, 2)
        for c in range(remaining // pairs, -1, -1):
            counts[k - 2] = c
            descend(k - 1, remaining - c * pairs)
        counts[k - 2] = 0

    descend(d, comb(d, 2))

    if q_ceiling is not None:
        found = [tv for tv in found if combinatorial_quotient(tv).value <= q_ceiling]
    found.sort(key=sort_key)
    log.debug("d=%d: %d T-vectors", d, len(found))
    return found
