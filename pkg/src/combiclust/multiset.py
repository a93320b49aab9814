"""Interval multiset estimate algebra.

An estimate assigns a fixed number of elements (cardinality) to the levels
of an ordinal scale, level 1 best. The step proximity between two estimates
counts the unit level-shifts needed to transform one into the other; medians
minimise total step proximity. Estimates are partially ordered by "reachable
through improvement steps only".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Optional, Sequence

ENUMERATION_GUARD = 10 ** 6


class MultisetError(ValueError):
    pass


@dataclass(frozen=True)
class MultisetEstimate:
    """Counts per ordinal level; position 0 is the best level."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if not self.counts:
            raise MultisetError("estimate needs at least one level")
        if any(c < 0 or int(c) != c for c in self.counts):
            raise MultisetError("counts must be nonnegative integers")
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @property
    def levels(self) -> int:
        return len(self.counts)

    @property
    def cardinality(self) -> int:
        return sum(self.counts)

    def cumulative(self) -> tuple[int, ...]:
        out, acc = [], 0
        for c in self.counts:
            acc += c
            out.append(acc)
        return tuple(out)

    def is_interval(self) -> bool:
        """True when the nonzero counts form one contiguous run of levels."""
        nz = [k for k, c in enumerate(self.counts) if c > 0]
        return not nz or nz[-1] - nz[0] + 1 == len(nz)

    def __repr__(self) -> str:
        return f"e{self.counts}"


def estimate(*counts: int) -> MultisetEstimate:
    return MultisetEstimate(tuple(counts))


@dataclass(frozen=True)
class StepProximity:
    """Unit level-shift decomposition: improvements vs degradations."""

    improvements: int  # shifts toward better (lower-index) levels
    degradations: int  # shifts toward worse levels

    @property
    def total(self) -> int:
        return self.improvements + self.degradations

    def as_tuple(self) -> tuple[int, int]:
        return (self.improvements, self.degradations)


def _same_scale(e1: MultisetEstimate, e2: MultisetEstimate) -> None:
    if e1.levels != e2.levels:
        raise MultisetError("scale size mismatch")
    if e1.cardinality != e2.cardinality:
        raise MultisetError("cardinality mismatch")


def multiset_coefficient(l: int, eta: int) -> int:
    """Number of multisets of cardinality ``eta`` over ``l`` levels."""
    if l < 1 or eta < 1:
        raise MultisetError("need l >= 1 and eta >= 1")
    return math.comb(l + eta - 1, eta)


def canonical_key(e: MultisetEstimate) -> tuple[int, ...]:
    """Sort key putting best-most estimates first (descending count lex)."""
    return tuple(-c for c in e.counts)


def enumerate_scale(l: int, eta: int,
                    interval_only: bool = False) -> list[MultisetEstimate]:
    """All estimates of cardinality ``eta`` over ``l`` levels, best-most first."""
    total = multiset_coefficient(l, eta)
    if total > ENUMERATION_GUARD:
        raise MultisetError(f"scale too large to enumerate ({total} estimates)")
    out = []
    for combo in combinations_with_replacement(range(l), eta):
        counts = [0] * l
        for lev in combo:
            counts[lev] += 1
        e = MultisetEstimate(tuple(counts))
        if interval_only and not e.is_interval():
            continue
        out.append(e)
    out.sort(key=canonical_key)
    return out


def delta(e1: MultisetEstimate, e2: MultisetEstimate) -> StepProximity:
    """Minimal decomposition of e1 -> e2 into unit level-shifts.

    Closed form on cumulative counts: each unit shift across the boundary
    between levels k and k+1 changes the k-th cumulative count by exactly
    one, so the boundary crossing numbers are |cum1_k - cum2_k|.
    """
    _same_scale(e1, e2)
    improvements = degradations = 0
    for c1, c2 in zip(e1.cumulative()[:-1], e2.cumulative()[:-1]):
        if c1 > c2:
            degradations += c1 - c2
        else:
            improvements += c2 - c1
    return StepProximity(improvements, degradations)


def dominates(e1: MultisetEstimate, e2: MultisetEstimate) -> str:
    """Compare on the improvement order: 'better', 'worse', 'equal' or
    'incomparable'. e1 is better iff its cumulative counts dominate."""
    _same_scale(e1, e2)
    c1, c2 = e1.cumulative(), e2.cumulative()
    ge = all(a >= b for a, b in zip(c1, c2))
    le = all(a <= b for a, b in zip(c1, c2))
    if ge and le:
        return "equal"
    if ge:
        return "better"
    if le:
        return "worse"
    return "incomparable"


@dataclass(frozen=True)
class MedianResult:
    median: MultisetEstimate
    cost: int
    co_minimal: tuple[MultisetEstimate, ...]  # every argmin, canonical order


def median(estimates: Sequence[MultisetEstimate], domain: str = "generalized",
           interval_only: bool = False,
           candidates: Optional[Iterable[MultisetEstimate]] = None) -> MedianResult:
    """Estimate minimising total step proximity to the given ones.

    ``generalized`` searches the whole scale (optionally only interval
    estimates); ``set`` restricts candidates to the input list. Ties break
    toward the best-most candidate in canonical order; all co-minimal
    candidates are reported alongside.
    """
    if not estimates:
        raise MultisetError("median of empty list")
    l, eta = estimates[0].levels, estimates[0].cardinality
    for e in estimates[1:]:
        _same_scale(estimates[0], e)
    if candidates is not None:
        pool = list(candidates)
    elif domain == "generalized":
        pool = enumerate_scale(l, eta, interval_only=interval_only)
    elif domain == "set":
        pool = sorted(set(estimates), key=canonical_key)
    else:
        raise MultisetError(f"unknown median domain {domain!r}")
    best_cost: Optional[int] = None
    winners: list[MultisetEstimate] = []
    for cand in pool:
        cost = sum(delta(cand, e).total for e in estimates)
        if best_cost is None or cost < best_cost:
            best_cost, winners = cost, [cand]
        elif cost == best_cost:
            winners.append(cand)
    winners.sort(key=canonical_key)
    return MedianResult(winners[0], best_cost, tuple(winners))


def integrate_sum(estimates: Sequence[MultisetEstimate]) -> MultisetEstimate:
    """Componentwise sum; cardinality adds up."""
    if not estimates:
        raise MultisetError("sum of empty list")
    l = estimates[0].levels
    if any(e.levels != l for e in estimates):
        raise MultisetError("scale size mismatch")
    return MultisetEstimate(tuple(sum(col) for col in zip(*(e.counts for e in estimates))))
