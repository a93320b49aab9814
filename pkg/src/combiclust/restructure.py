"""One-stage restructuring of a clustering solution.

Given an existing solution and a goal solution, derive the compressed set
of single-item relocation operations that close the gap, then select a
budget-feasible subset by exact knapsack (or multiple-choice) dynamic
programming and apply it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Optional, Sequence

from .compare import partition_edit_cost
from .core import Item, Partition, item_key

WEIGHT_RESOLUTION = 1e-3


class RestructureError(ValueError):
    pass


def _scale_weights(weights: Sequence[float], resolution: float) -> list[int]:
    out = []
    for w in weights:
        if w < 0:
            raise RestructureError("weights must be nonnegative")
        scaled = round(w / resolution)
        if abs(scaled * resolution - w) > resolution / 2 + 1e-12:
            raise RestructureError(
                f"weight {w} not representable at resolution {resolution}")
        out.append(scaled)
    return out


def knapsack_dp(items: Sequence[tuple[float, float]], capacity: float,
                resolution: float = WEIGHT_RESOLUTION) -> tuple[int, ...]:
    """Exact maximum-profit subset within capacity; returns chosen indices.

    Real weights are scaled to integers at the declared resolution.
    """
    if capacity < 0:
        raise RestructureError("capacity must be nonnegative")
    weights = _scale_weights([w for _, w in items], resolution)
    cap = math.floor(capacity / resolution + 1e-9)
    n = len(items)
    dp = [[0.0] * (cap + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        profit, w = items[i - 1][0], weights[i - 1]
        prev = dp[i - 1]
        row = dp[i]
        for c in range(cap + 1):
            row[c] = prev[c]
            if w <= c and prev[c - w] + profit > row[c]:
                row[c] = prev[c - w] + profit
    chosen = []
    c = cap
    for i in range(n, 0, -1):
        if dp[i][c] != dp[i - 1][c]:
            chosen.append(i - 1)
            c -= weights[i - 1]
    return tuple(sorted(chosen))


def knapsack_enumerate(items: Sequence[tuple[float, float]],
                       capacity: float) -> float:
    """Brute-force optimum value (test oracle, <= ~20 items)."""
    best = 0.0
    n = len(items)
    for mask in range(1 << n):
        w = sum(items[i][1] for i in range(n) if mask >> i & 1)
        if w <= capacity + 1e-12:
            p = sum(items[i][0] for i in range(n) if mask >> i & 1)
            best = max(best, p)
    return best


def multiple_choice_dp(groups: Sequence[Sequence[tuple[float, float]]],
                       capacity: float,
                       resolution: float = WEIGHT_RESOLUTION
                       ) -> tuple[tuple[int, ...], float]:
    """Pick exactly one option per group maximising profit within capacity.

    A group that may be skipped must carry an explicit zero-cost option.
    Returns (option index per group, total profit); raises if no feasible
    combination exists.
    """
    if capacity < 0:
        raise RestructureError("capacity must be nonnegative")
    cap = math.floor(capacity / resolution + 1e-9)
    NEG = -math.inf
    dp = [NEG] * (cap + 1)
    dp[0] = 0.0
    back: list[list[Optional[tuple[int, int]]]] = []
    scaled_groups = [
        list(zip([p for p, _ in g], _scale_weights([w for _, w in g], resolution)))
        for g in groups]
    for gi, options in enumerate(scaled_groups):
        ndp = [NEG] * (cap + 1)
        nback: list[Optional[tuple[int, int]]] = [None] * (cap + 1)
        for c in range(cap + 1):
            if dp[c] == NEG:
                continue
            for oi, (p, w) in enumerate(options):
                nc = c + w
                if nc <= cap and dp[c] + p > ndp[nc]:
                    ndp[nc] = dp[c] + p
                    nback[nc] = (c, oi)
        dp = ndp
        back.append(nback)
    best_c = None
    for c in range(cap + 1):
        if dp[c] > NEG and (best_c is None or dp[c] > dp[best_c]):
            best_c = c
    if best_c is None:
        raise RestructureError("no feasible option combination within capacity")
    choice = [0] * len(groups)
    c = best_c
    for gi in range(len(groups) - 1, -1, -1):
        prev_c, oi = back[gi][c]
        choice[gi] = oi
        c = prev_c
    return (tuple(choice), dp[best_c])


def multiple_choice_enumerate(groups: Sequence[Sequence[tuple[float, float]]],
                              capacity: float) -> Optional[float]:
    """Brute-force optimum over the option product (test oracle)."""
    best = None
    for combo in product(*[range(len(g)) for g in groups]):
        w = sum(groups[gi][oi][1] for gi, oi in enumerate(combo))
        if w <= capacity + 1e-12:
            p = sum(groups[gi][oi][0] for gi, oi in enumerate(combo))
            best = p if best is None else max(best, p)
    return best


@dataclass(frozen=True)
class ChangeOperation:
    """Move one item from its current cluster to the goal-matched cluster.

    ``source_slot`` and ``target_slot`` index the working cluster list of
    the initial solution (clusters in canonical order, padded with empty
    slots when the goal has more clusters); the content tuples are the
    initial state of those slots, kept for reporting.
    """

    item: Item
    source_slot: int
    target_slot: int
    source: tuple[Item, ...]
    target: tuple[Item, ...]
    cost: float
    profit: float

    def __post_init__(self):
        if self.cost < 0:
            raise RestructureError("operation cost must be nonnegative")
        if self.item not in self.source:
            raise RestructureError("item must sit in its source cluster")
        if self.source_slot == self.target_slot:
            raise RestructureError("source and target clusters coincide")


@dataclass(frozen=True)
class RestructurePlan:
    operations: tuple[ChangeOperation, ...]          # the compressed set
    selected: tuple[ChangeOperation, ...]            # chosen by the knapsack
    result: Partition
    total_cost: float
    residual_distance: int

    @property
    def change_cost(self) -> float:
        return self.total_cost


def derive_operations(s1: Partition, s2: Partition,
                      op_costs: Optional[Mapping[Item, float]] = None,
                      op_profits: Optional[Mapping[Item, float]] = None
                      ) -> tuple[ChangeOperation, ...]:
    """Compressed operation set: one relocation per item whose cluster
    differs between the max-intersection-matched solutions."""
    trace = partition_edit_cost(s1, s2)
    src = [tuple(c) for c in s1.clusters] + [()] * max(
        0, len(s2.clusters) - len(s1.clusters))
    dst = [tuple(c) for c in s2.clusters]
    to_src = {c: r for r, c in trace.matching}
    ops = []
    for item in sorted(s1.universe, key=item_key):
        where_src = next(k for k, c in enumerate(src) if item in c)
        where_dst = next(k for k, c in enumerate(dst) if item in c)
        target_row = to_src[where_dst]
        if target_row != where_src:
            ops.append(ChangeOperation(
                item, where_src, target_row,
                src[where_src], src[target_row],
                float(op_costs.get(item, 1.0)) if op_costs else 1.0,
                float(op_profits.get(item, 1.0)) if op_profits else 1.0))
    return tuple(ops)


def apply_operations(s1: Partition,
                     ops: Sequence[ChangeOperation]) -> Partition:
    width = max([len(s1.clusters)] + [op.target_slot + 1 for op in ops])
    blocks = [set(c) for c in s1.clusters]
    blocks.extend(set() for _ in range(width - len(blocks)))
    for op in ops:
        for b in blocks:
            b.discard(op.item)
        blocks[op.target_slot].add(op.item)
    return Partition.of(*[b for b in blocks if b], universe=s1.universe)


def restructure_one_stage(s1: Partition, s2: Partition, budget: float,
                          op_costs: Optional[Mapping[Item, float]] = None,
                          op_profits: Optional[Mapping[Item, float]] = None,
                          resolution: float = WEIGHT_RESOLUTION) -> RestructurePlan:
    """Select a budget-feasible subset of the compressed operations by
    exact knapsack and apply it, minimising the residual distance to the
    goal (unit profits make both objectives coincide)."""
    if budget < 0:
        raise RestructureError("budget must be nonnegative")
    if s1.universe != s2.universe:
        raise RestructureError("solutions cover different universes")
    ops = derive_operations(s1, s2, op_costs, op_profits)
    chosen_idx = knapsack_dp([(op.profit, op.cost) for op in ops], budget,
                             resolution)
    selected = tuple(ops[k] for k in chosen_idx)
    result = apply_operations(s1, selected)
    residual = partition_edit_cost(result, s2).cost
    return RestructurePlan(ops, selected, result,
                           sum(op.cost for op in selected), residual)
