"""
Necessary conditions on a T-vector. Each filter either lets the vector pass or
excludes it with the name of the failed test and the inequality instantiated
with numbers, so every exclusion in a table audit can be checked by hand.
"""

import json
from collections import Counter
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List, Optional, Tuple, TypedDict

from .tspace import TVector

PASSED = "passed"
EXCLUDED = "excluded"

MULTIPLICITY_SUM = "multiplicity_sum"
TWO_PENCILS = "two_pencils"
PARITY_PROFILE = "parity_profile"
HIRZEBRUCH = "hirzebruch"


class Mode(StrEnum):
    ABSOLUTE = "absolute"
    COMPLEX = "complex"


class VerdictDict(TypedDict):
    status: str
    criterion: Optional[str]
    detail: str


@dataclass(slots=True)
class ExclusionVerdict:
    status: str = PASSED
    criterion: Optional[str] = None
    detail: str = ""

    @property
    def excluded(self) -> bool:
        return self.status == EXCLUDED

    @classmethod
    def exclude(cls, criterion: str, detail: str) -> "ExclusionVerdict":
        return cls(EXCLUDED, criterion, detail)

    @classmethod
    def passed(cls, criterion: Optional[str] = None, detail: str = "") -> "ExclusionVerdict":
        return cls(PASSED, criterion, detail)

    def to_dict(self) -> VerdictDict:
        return {"status": self.status, "criterion": self.criterion, "detail": self.detail}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


LineProfile = Tuple[int, ...]


def multiplicity_sum_filter(tv: TVector) -> ExclusionVerdict:
    """
    The r largest multiplicities sum to at most d + C(r, 2), for every r.

    Args:
        tv (TVector): A valid T-vector.

    Returns:
        ExclusionVerdict: Excluded at the first failing r.
    """
    mults = tv.multiplicities()
    total = 0
    for r, m in enumerate(mults[: tv.d], start=1):
        total += m
        bound = tv.d + comb(r, 2)
        if total > bound:
            shown = "+".join(map(str, mults[:r]))
            return ExclusionVerdict.exclude(
                MULTIPLICITY_SUM, f"r={r}: {shown} = {total} > d + C({r},2) = {bound}"
            )
    return ExclusionVerdict.passed(MULTIPLICITY_SUM)


def two_pencils_filter(tv: TVector) -> ExclusionVerdict:
    s = tv.s
    if s < 2:
        return ExclusionVerdict.passed(TWO_PENCILS, "s < 2")
    m1, m2 = tv.multiplicities()[:2]
    need = (m1 - 1) * (m2 - 1) + 2
    if need > s:
        return ExclusionVerdict.exclude(
            TWO_PENCILS, f"m1={m1}, m2={m2}: ({m1 - 1})({m2 - 1})+2 = {need} > s = {s}"
        )
    return ExclusionVerdict.passed(TWO_PENCILS)


def line_profiles(tv: TVector) -> List[LineProfile]:
    """
    Every way a single line can meet the others: multisets of multiplicities
    m >= 2 with sum(m - 1) = d - 1, using m at most t_m times.

    Profiles are returned as descending tuples in lexicographically
    descending order.
    """
    available = [k for k in range(tv.d, 1, -1) if tv.t(k)]
    out: List[LineProfile] = []

    def build(idx: int, remaining: int, parts: List[int]) -> None:
        if remaining == 0:
            out.append(tuple(parts))
            return
        if idx == len(available):
            return
        m = available[idx]
        most = min(tv.t(m), remaining // (m - 1))
        for c in range(most, -1, -1):
            build(idx + 1, remaining - c * (m - 1), parts + [m] * c)

    build(0, tv.d - 1, [])
    return out


def profile_counts_feasible(tv: TVector, profiles: List[LineProfile]) -> Optional[List[int]]:
    """
    Find x_P >= 0 with sum x_P = d and, for every m, sum_P (#m in P) x_P = m t_m.

    Returns the first solution found by depth-first search, or None.
    """
    ks = [k for k in range(2, tv.d + 1)]
    target = tuple(k * tv.t(k) for k in ks)
    vectors = [tuple(Counter(p)[k] for k in ks) for p in profiles]

    @lru_cache(maxsize=None)
    def solve(idx: int, lines: int, need: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
        if idx == len(vectors):
            return () if lines == 0 and not any(need) else None
        vec = vectors[idx]
        most = lines
        for k, c in enumerate(vec):
            if c:
                most = min(most, need[k] // c)
        for x in range(most, -1, -1):
            rest = tuple(n - x * c for n, c in zip(need, vec))
            tail = solve(idx + 1, lines - x, rest)
            if tail is not None:
                return (x,) + tail
        return None

    found = solve(0, tv.d, target)
    return list(found) if found is not None else None


def parity_profile_filter(tv: TVector) -> ExclusionVerdict:
    profiles = line_profiles(tv)
    if not profiles:
        return ExclusionVerdict.exclude(
            PARITY_PROFILE, f"no line profile: d-1 = {tv.d - 1} is not a sum of (m-1) over available points"
        )
    counts = profile_counts_feasible(tv, profiles)
    if counts is None:
        usable = sorted({m for p in profiles for m in p}, reverse=True)
        starved = [k for k in range(tv.d, 1, -1) if tv.t(k) and k not in usable]
        if starved:
            k = starved[0]
            detail = f"no line profile contains a {k}-fold point yet {k}*t_{k} = {k * tv.t(k)} incidences are required"
        else:
            shown = "; ".join("{" + ",".join(map(str, p)) + "}" for p in profiles)
            detail = f"profiles {shown} cannot be combined over {tv.d} lines to give m*t_m incidences"
        return ExclusionVerdict.exclude(PARITY_PROFILE, detail)
    return ExclusionVerdict.passed(PARITY_PROFILE)


def hirzebruch_filter(tv: TVector) -> ExclusionVerdict:
    d = tv.d
    if tv.t(d) or tv.t(d - 1):
        return ExclusionVerdict.passed(HIRZEBRUCH, "inapplicable")
    lhs = tv.t(2) + Fraction(3, 4) * tv.t(3)
    rhs = d + sum((k - 4) * tv.t(k) for k in range(5, d + 1))
    if lhs < rhs:
        return ExclusionVerdict.exclude(
            HIRZEBRUCH, f"t2 + 3/4*t3 = {lhs} < d + sum (k-4)t_k = {rhs}"
        )
    return ExclusionVerdict.passed(HIRZEBRUCH, f"{lhs} >= {rhs}")


def apply_all(tv: TVector, mode: Mode = Mode.ABSOLUTE) -> ExclusionVerdict:
    filters = [multiplicity_sum_filter, two_pencils_filter, parity_profile_filter]
    if Mode(mode) is Mode.COMPLEX:
        filters.append(hirzebruch_filter)
    for check in filters:
        verdict = check(tv)
        if verdict.excluded:
            return verdict
    return ExclusionVerdict.passed(None, "all filters passed")
