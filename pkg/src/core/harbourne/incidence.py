"""
Abstract realizability of a T-vector.

Lines are vertices 0..d-1 and singular points are cliques: a combinatorial
arrangement with histogram T is a partition of the pairs of K_d into cliques
with exactly t_k cliques of size k. The search below either builds such a
partition or proves that none exists.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator, List, Optional, Tuple, TypedDict

from src.utils.constants import DEFAULT_NODE_BUDGET

from .criteria import multiplicity_sum_filter
from .errors import SearchBudgetExceeded
from .tspace import TVector

log = logging.getLogger(__name__)

PARALLEL_DEPTH = 2


class PartitionDict(TypedDict):
    d: int
    points: List[List[int]]


@dataclass(slots=True)
class CliquePartition:
    d: int
    points: List[List[int]] = field(default_factory=list)

    def line_profile(self, line: int) -> List[int]:
        """Multiplicities of the points on ``line``, largest first."""
        return sorted((len(p) for p in self.points if line in p), reverse=True)

    def histogram(self) -> List[int]:
        counts = [0] * max(self.d - 1, 0)
        for p in self.points:
            if 2 <= len(p) <= self.d:
                counts[len(p) - 2] += 1
        return counts

    def to_dict(self) -> PartitionDict:
        return {"d": self.d, "points": [list(p) for p in self.points]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: PartitionDict) -> "CliquePartition":
        return cls(int(data["d"]), [[int(v) for v in p] for p in data["points"]])


@dataclass(slots=True)
class SearchOutcome:
    feasible: bool
    witness: Optional[CliquePartition] = None
    nodes_explored: int = 0
    exhausted: bool = True


def validate_partition(partition: CliquePartition, tv: TVector) -> bool:
    """
    Check a witness independently of the search that produced it.

    Args:
        partition (CliquePartition): The candidate witness.
        tv (TVector): The histogram it should realize.

    Returns:
        bool: True iff every pair is covered exactly once, cliques are proper
        subsets of range(d) of size >= 2, any two cliques share at most one
        line, and the size histogram equals T.
    """
    d = partition.d
    if d != tv.d:
        return False
    seen = set()
    cliques = []
    for p in partition.points:
        members = set(p)
        if len(members) != len(p) or len(members) < 2:
            return False
        if any(not isinstance(v, int) or not 0 <= v < d for v in members):
            return False
        for pair in combinations(sorted(members), 2):
            if pair in seen:
                return False
            seen.add(pair)
        cliques.append(members)
    if len(seen) != d * (d - 1) // 2:
        return False
    for a, b in combinations(cliques, 2):
        if len(a & b) > 1:
            return False
    return partition.histogram() == list(tv.counts)


@lru_cache(maxsize=None)
def _part_tables(d: int, remaining: Tuple[int, ...]) -> Tuple[List[Optional[int]], List[Optional[int]], int]:
    """
    For each residual r in 0..d-1: the fewest and most cliques from the
    remaining stock whose (m - 1) values sum to r, and a bitmask of the r
    reachable with odd m only.
    """
    top = d - 1
    lo: List[Optional[int]] = [None] * (top + 1)
    hi: List[Optional[int]] = [None] * (top + 1)
    lo[0] = hi[0] = 0
    odd = 1
    for k, count in enumerate(remaining, start=2):
        if not count:
            continue
        step = k - 1
        new_lo, new_hi = list(lo), list(hi)
        for r in range(top + 1):
            if lo[r] is None:
                continue
            for u in range(1, count + 1):
                r2 = r + u * step
                if r2 > top:
                    break
                if new_lo[r2] is None or lo[r] + u < new_lo[r2]:
                    new_lo[r2] = lo[r] + u
                if new_hi[r2] is None or hi[r] + u > new_hi[r2]:
                    new_hi[r2] = hi[r] + u
        lo, hi = new_lo, new_hi
        if k % 2:
            reach = odd
            for u in range(1, count + 1):
                reach |= odd << (u * step)
            odd = reach & ((1 << (top + 1)) - 1)
    return lo, hi, odd


class _PartitionSearch:
    """Depth-first search state; cliques are stored as bitmasks over lines."""

    def __init__(self, tv: TVector, node_budget: int) -> None:
        self.d = tv.d
        self.s = tv.s
        self.full = (1 << tv.d) - 1
        self.rem = [0, 0] + list(tv.counts)
        self.sizes = [k for k in range(tv.d, 1, -1) if tv.t(k)]
        self.covered = [0] * tv.d
        self.touched = 0
        self.cliques: List[Tuple[int, int]] = []
        self.nodes = 0
        self.budget = node_budget
        self.witness: Optional[List[Tuple[int, int]]] = None

    def _next_pair(self) -> Optional[Tuple[int, int, int]]:
        for i in range(self.d):
            open_ = self.full & ~self.covered[i] & ~(1 << i)
            if open_:
                return i, (open_ & -open_).bit_length() - 1, open_
        return None

    def _place(self, mask: int, m: int) -> int:
        before = self.touched
        v = mask
        while v:
            low = v & -v
            self.covered[low.bit_length() - 1] |= mask & ~low
            v ^= low
        self.rem[m] -= 1
        self.touched |= mask
        self.cliques.append((mask, m))
        return before

    def _unplace(self, mask: int, m: int, before: int) -> None:
        self.cliques.pop()
        self.touched = before
        self.rem[m] += 1
        v = mask
        while v:
            low = v & -v
            self.covered[low.bit_length() - 1] &= ~mask
            v ^= low

    def _members(self, pool: int, need: int) -> Iterator[int]:
        """Pairwise-uncovered subsets of ``pool`` of size ``need``; untouched lines only as a lowest prefix."""
        lines = [v for v in range(self.d) if pool >> v & 1]

        def pick(idx: int, need: int, chosen: int, skipped_free: bool) -> Iterator[int]:
            if need == 0:
                yield chosen
                return
            for pos in range(idx, len(lines) - need + 1):
                v = lines[pos]
                free = not self.touched >> v & 1
                if free and skipped_free:
                    continue
                if not self.covered[v] & chosen:
                    yield from pick(pos + 1, need - 1, chosen | 1 << v, skipped_free)
                if free:
                    skipped_free = True

        yield from pick(0, need, 0, False)

    def _pencils_ok(self, mask: int, m: int) -> bool:
        for other, size in self.cliques:
            if mask & other:
                if (m - 1) * (size - 1) + 2 > self.s:
                    return False
            elif m * size + 2 > self.s:
                return False
        return True

    def _residuals_ok(self) -> bool:
        lo, hi, odd = _part_tables(self.d, tuple(self.rem[2:]))
        top = self.d - 1
        sum_lo = sum_hi = needs_even = 0
        for v in range(self.d):
            r = top - self.covered[v].bit_count()
            if lo[r] is None:
                return False
            sum_lo += lo[r]
            sum_hi += hi[r]
            if not odd >> r & 1:
                needs_even += 1
        incidences = sum(k * c for k, c in enumerate(self.rem) if c)
        if not sum_lo <= incidences <= sum_hi:
            return False
        even_capacity = sum(k * c for k, c in enumerate(self.rem) if c and k % 2 == 0)
        return needs_even <= even_capacity

    def _children(self) -> Iterator[Tuple[int, int]]:
        pair = self._next_pair()
        if pair is None:
            return
        i, j, open_i = pair
        pool = open_i & ~self.covered[j] & ~(1 << j)
        room = pool.bit_count()
        for m in self.sizes:
            if not self.rem[m] or m - 2 > room:
                continue
            for extra in self._members(pool, m - 2):
                self.nodes += 1
                if self.nodes > self.budget:
                    raise SearchBudgetExceeded(
                        f"node budget {self.budget} exhausted", nodes_explored=self.nodes
                    )
                mask = extra | 1 << i | 1 << j
                if not self._pencils_ok(mask, m):
                    continue
                before = self._place(mask, m)
                if self._residuals_ok():
                    yield mask, m
                self._unplace(mask, m, before)

    def descend(self) -> bool:
        if self._next_pair() is None:
            self.witness = list(self.cliques)
            return True
        for _ in self._children():
            if self.descend():
                return True
        return False

    def branches(self, depth: int) -> List[Tuple[Tuple[int, int], ...]]:
        out: List[Tuple[Tuple[int, int], ...]] = []

        def walk(level: int) -> None:
            if level == depth or self._next_pair() is None:
                out.append(tuple(self.cliques))
                return
            for _ in self._children():
                walk(level + 1)

        walk(0)
        return out

    def replay(self, prefix: Tuple[Tuple[int, int], ...]) -> None:
        for mask, m in prefix:
            self._place(mask, m)

    def partition(self) -> CliquePartition:
        assert self.witness is not None
        return CliquePartition(
            self.d, [[v for v in range(self.d) if mask >> v & 1] for mask, _ in self.witness]
        )


def _search_branch(args: Tuple[TVector, Tuple[Tuple[int, int], ...], int]) -> Tuple[str, Optional[List[List[int]]], int]:
    tv, prefix, budget = args
    search = _PartitionSearch(tv, budget)
    search.replay(prefix)
    try:
        found = search.descend()
    except SearchBudgetExceeded as e:
        return "budget", None, e.nodes_explored
    if found:
        return "feasible", search.partition().points, search.nodes
    return "infeasible", None, search.nodes


def feasible_arrangement(
    tv: TVector, node_budget: int = DEFAULT_NODE_BUDGET, jobs: int = 1
) -> SearchOutcome:
    """
    Decide whether some clique partition of K_d has histogram T.

    Pair {i, j} with i the smallest line still missing a partner and j its
    smallest missing partner is covered next, by a clique whose other members
    all exceed j. Untouched lines are interchangeable, so only the
    lowest-labelled ones are ever added. Partial states are pruned by the two
    pencils inequalities between cliques, per-line residual
    representability, parity capacity and incidence balance.

    Args:
        tv (TVector): The histogram to realize.
        node_budget (int): Maximum number of clique placements tried.
        jobs (int): Worker processes; > 1 splits the tree a few levels down.

    Returns:
        SearchOutcome: Feasible with a witness, or infeasible (always exhausted).

    Raises:
        SearchBudgetExceeded: If the budget runs out before an answer.
    """
    tv.validate()
    log.info("incidence search d=%d T=%s budget=%d jobs=%d", tv.d, tv.encode(), node_budget, jobs)
    if multiplicity_sum_filter(tv).excluded:
        log.info("incidence search T=%s: infeasible at the root", tv.encode())
        return SearchOutcome(False, None, 0, True)

    search = _PartitionSearch(tv, node_budget)
    if jobs <= 1:
        try:
            found = search.descend()
        except SearchBudgetExceeded:
            log.warning("incidence search T=%s: budget of %d nodes exhausted", tv.encode(), node_budget)
            raise
        log.info("incidence search T=%s: %s after %d nodes", tv.encode(), "feasible" if found else "infeasible", search.nodes)
        if found:
            return SearchOutcome(True, search.partition(), search.nodes, True)
        return SearchOutcome(False, None, search.nodes, True)

    prefixes = search.branches(PARALLEL_DEPTH)
    nodes = search.nodes
    over_budget = False
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_search_branch, [(tv, p, node_budget) for p in prefixes]))
    for status, points, explored in results:
        nodes += explored
        if status == "feasible":
            log.info("incidence search T=%s: feasible after %d nodes", tv.encode(), nodes)
            return SearchOutcome(True, CliquePartition(tv.d, points), nodes, True)
        over_budget = over_budget or status == "budget"
    if over_budget:
        raise SearchBudgetExceeded(f"node budget {node_budget} exhausted in a branch", nodes_explored=nodes)
    return SearchOutcome(False, None, nodes, True)
