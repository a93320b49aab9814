"""Assignment-based clustering: optimal bipartite matching, a regret
heuristic for the generalized assignment problem, the capacitated
access-point connection model, assignment under multiset-valued profits,
and round-robin slot scheduling for a multi-beam antenna."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Optional, Sequence

from .core import Item, item_key
from .multiset import MultisetEstimate, canonical_key, median
from .proximity import OrdinalMappingRule


class AssignmentError(ValueError):
    pass


def assignment_exact(cost: Sequence[Sequence[float]],
                     sense: str = "min") -> tuple[tuple[int, ...], float]:
    """Optimal perfect matching of a square cost matrix.

    Returns (columns by row, objective value). Hungarian algorithm with
    potentials, O(n^3).
    """
    n = len(cost)
    if any(len(row) != n for row in cost):
        raise AssignmentError("cost matrix must be square")
    if n == 0:
        return ((), 0.0)
    if sense == "max":
        grid = [[-float(c) for c in row] for row in cost]
    elif sense == "min":
        grid = [[float(c) for c in row] for row in cost]
    else:
        raise AssignmentError("sense must be 'min' or 'max'")

    INF = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    way = [0] * (n + 1)
    match = [0] * (n + 1)  # 1-based: match[col] = row
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0, delta, j1 = match[j0], INF, 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = grid[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            match[j0] = match[way[j0]]
            j0 = way[j0]
    cols = [0] * n
    for j in range(1, n + 1):
        cols[match[j] - 1] = j - 1
    value = sum(float(cost[i][cols[i]]) for i in range(n))
    return (tuple(cols), value)


@dataclass(frozen=True)
class AssignmentInstance:
    """Generalized assignment data: per-pair profit and weight, per-agent
    capacity, and a per-item cap on how many agents may take it (the cap
    is carried in the model; the solvers here assign at most once)."""

    profits: tuple[tuple[float, ...], ...]   # item x agent
    weights: tuple[tuple[float, ...], ...]   # item x agent
    capacities: tuple[float, ...]
    max_assignments: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.profits)
        mu = len(self.capacities)
        if len(self.weights) != n:
            raise AssignmentError("profit and weight shapes differ")
        for pr, wr in zip(self.profits, self.weights):
            if len(pr) != mu or len(wr) != mu:
                raise AssignmentError("row width must equal the agent count")
            if any(w < 0 for w in wr):
                raise AssignmentError("weights must be nonnegative")
        if any(b < 0 for b in self.capacities):
            raise AssignmentError("capacities must be nonnegative")
        if not self.max_assignments:
            object.__setattr__(self, "max_assignments", tuple([1] * n))

    @property
    def n(self) -> int:
        return len(self.profits)

    @property
    def agents(self) -> int:
        return len(self.capacities)


@dataclass(frozen=True)
class GapResult:
    assignment: tuple[Optional[int], ...]  # agent per item, None = unassigned
    total_profit: float
    unassigned: tuple[int, ...]


def _check_gap(inst: AssignmentInstance, assignment: Sequence[Optional[int]]) -> None:
    load = [0.0] * inst.agents
    for i, j in enumerate(assignment):
        if j is not None:
            load[j] += inst.weights[i][j]
    for j, b in enumerate(inst.capacities):
        if load[j] > b + 1e-9:
            raise AssignmentError(f"capacity of agent {j} violated")


def gap_greedy(inst: AssignmentInstance) -> GapResult:
    """Regret heuristic: assign the item with the largest gap between its
    best and second-best feasible agent profit first, to its best agent.
    Items with no feasible agent are reported, never dropped silently."""
    remaining = list(range(inst.n))
    load = [0.0] * inst.agents
    assignment: list[Optional[int]] = [None] * inst.n
    while remaining:
        best_item = None
        best_key = None
        best_agent = None
        for i in remaining:
            feas = [(inst.profits[i][j], -j) for j in range(inst.agents)
                    if load[j] + inst.weights[i][j] <= inst.capacities[j] + 1e-12]
            if not feas:
                continue
            feas.sort(reverse=True)
            top = feas[0][0]
            second = feas[1][0] if len(feas) > 1 else -math.inf
            regret = top - second
            key = (regret, top, -i)
            if best_key is None or key > best_key:
                best_key = key
                best_item = i
                best_agent = -feas[0][1]
        if best_item is None:
            break
        assignment[best_item] = best_agent
        load[best_agent] += inst.weights[best_item][best_agent]
        remaining.remove(best_item)
    _check_gap(inst, assignment)
    profit = sum(inst.profits[i][j] for i, j in enumerate(assignment)
                 if j is not None)
    return GapResult(tuple(assignment), profit,
                     tuple(i for i, j in enumerate(assignment) if j is None))


def gap_exhaustive(inst: AssignmentInstance) -> GapResult:
    """Brute-force GAP optimum (small instances; test oracle)."""
    if inst.n * math.log2(inst.agents + 1) > 24:
        raise AssignmentError("exhaustive GAP limited to small instances")
    best = None
    for combo in product([None] + list(range(inst.agents)), repeat=inst.n):
        load = [0.0] * inst.agents
        ok = True
        for i, j in enumerate(combo):
            if j is not None:
                load[j] += inst.weights[i][j]
        for j, b in enumerate(inst.capacities):
            if load[j] > b + 1e-12:
                ok = False
                break
        if not ok:
            continue
        profit = sum(inst.profits[i][j] for i, j in enumerate(combo)
                     if j is not None)
        if best is None or profit > best[0]:
            best = (profit, combo)
    profit, combo = best
    return GapResult(tuple(combo), profit,
                     tuple(i for i, j in enumerate(combo) if j is None))


@dataclass(frozen=True)
class AccessPointInstance:
    """Users and access points for the capacitated connection model."""

    user_coords: tuple[tuple[float, ...], ...]
    user_bandwidth: tuple[float, ...]
    user_reliability: tuple[float, ...]
    ap_coords: tuple[tuple[float, ...], ...]
    ap_bandwidth: tuple[float, ...]
    ap_user_cap: tuple[int, ...]
    ap_reliability: tuple[float, ...]
    ap_max_distance: tuple[float, ...]

    def __post_init__(self):
        n, mu = len(self.user_coords), len(self.ap_coords)
        for name in ("user_bandwidth", "user_reliability"):
            if len(getattr(self, name)) != n:
                raise AssignmentError(f"{name} must have one entry per user")
        for name in ("ap_bandwidth", "ap_user_cap", "ap_reliability",
                     "ap_max_distance"):
            if len(getattr(self, name)) != mu:
                raise AssignmentError(f"{name} must have one entry per access point")
        if any(b <= 0 for b in self.ap_bandwidth) or any(k <= 0 for k in self.ap_user_cap):
            raise AssignmentError("access point capacities must be positive")

    @property
    def n(self) -> int:
        return len(self.user_coords)

    @property
    def mu(self) -> int:
        return len(self.ap_coords)

    def distance(self, i: int, j: int) -> float:
        return math.sqrt(sum((a - b) ** 2
                             for a, b in zip(self.user_coords[i], self.ap_coords[j])))

    def allowed(self, i: int, j: int) -> bool:
        """Distance and reliability forbidding rules."""
        return (self.distance(i, j) <= self.ap_max_distance[j]
                and self.user_reliability[i] <= self.ap_reliability[j])


DEFAULT_PROFIT_RULE = OrdinalMappingRule.from_breakpoints(
    (0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0), (1, 2, 3))


def access_point_profits(inst: AccessPointInstance,
                         rule: OrdinalMappingRule = DEFAULT_PROFIT_RULE,
                         weights: tuple[float, float, float] = (0.5, 0.25, 0.25)
                         ) -> list[list[Optional[int]]]:
    """Ordinal profit per admissible (user, access point) pair.

    A weighted sum of normalised closeness, reliability headroom and
    bandwidth headroom in [0, 1] is mapped through the rule (level 3 best);
    forbidden pairs get None.
    """
    wd, wr, wf = weights
    out: list[list[Optional[int]]] = []
    for i in range(inst.n):
        row: list[Optional[int]] = []
        for j in range(inst.mu):
            if not inst.allowed(i, j):
                row.append(None)
                continue
            closeness = 1.0 - inst.distance(i, j) / inst.ap_max_distance[j]
            rel = ((inst.ap_reliability[j] - inst.user_reliability[i])
                   / inst.ap_reliability[j])
            band = max(0.0, 1.0 - inst.user_bandwidth[i] / inst.ap_bandwidth[j])
            score = min(1.0, max(0.0, wd * closeness + wr * rel + wf * band))
            row.append(rule.level(score))
        out.append(row)
    return out


@dataclass(frozen=True)
class AccessPointResult:
    assignment: tuple[Optional[int], ...]
    total_profit: float
    unassigned: tuple[int, ...]


def access_point_assignment(inst: AccessPointInstance,
                            rule: OrdinalMappingRule = DEFAULT_PROFIT_RULE
                            ) -> AccessPointResult:
    """Maximise total ordinal profit subject to per-point bandwidth,
    user-count caps and the forbidding rules. Exact branch and bound;
    infeasible users are listed unassigned."""
    profits = access_point_profits(inst, rule)
    order = list(range(inst.n))
    best: dict = {"profit": -1.0, "assign": tuple([None] * inst.n)}
    ub_tail = [0.0] * (inst.n + 1)
    for i in reversed(order):
        row_best = max((p for p in profits[i] if p is not None), default=0)
        ub_tail[i] = ub_tail[i + 1] + row_best

    assign: list[Optional[int]] = [None] * inst.n
    band = [0.0] * inst.mu
    count = [0] * inst.mu

    def rec(k: int, profit: float):
        if profit + ub_tail[k] <= best["profit"]:
            return
        if k == inst.n:
            if profit > best["profit"]:
                best["profit"] = profit
                best["assign"] = tuple(assign)
            return
        options = [(j, profits[k][j]) for j in range(inst.mu)
                   if profits[k][j] is not None]
        options.sort(key=lambda t: (-t[1], t[0]))
        for j, p in options:
            if count[j] + 1 > inst.ap_user_cap[j]:
                continue
            if band[j] + inst.user_bandwidth[k] > inst.ap_bandwidth[j] + 1e-12:
                continue
            assign[k] = j
            band[j] += inst.user_bandwidth[k]
            count[j] += 1
            rec(k + 1, profit + p)
            assign[k] = None
            band[j] -= inst.user_bandwidth[k]
            count[j] -= 1
        rec(k + 1, profit)  # leave user k unassigned

    rec(0, 0.0)
    final = best["assign"]
    return AccessPointResult(
        final, max(best["profit"], 0.0),
        tuple(i for i, j in enumerate(final) if j is None))


@dataclass(frozen=True)
class MultisetAssignmentResult:
    assignment: tuple[int, ...]  # agent per item
    objective: MultisetEstimate  # generalized median of the selected estimates


def assignment_multiset(profits: Sequence[Sequence[MultisetEstimate]],
                        caps: Sequence[int],
                        guard: int = 200_000) -> MultisetAssignmentResult:
    """Full assignment whose selected-estimate generalized median is maximal.

    Exhaustive over feasible assignments (guarded); assignments are ranked
    by the canonical lattice position of their median estimate, which is a
    linear extension of the improvement order, so the winner is a maximal
    element and ties are deterministic.
    """
    n = len(profits)
    mu = len(caps)
    if n == 0:
        raise AssignmentError("no items")
    if any(len(row) != mu for row in profits):
        raise AssignmentError("profit row width must equal the agent count")
    if mu ** n > guard:
        raise AssignmentError("instance too large for exhaustive search")
    best = None
    for combo in product(range(mu), repeat=n):
        counts = [0] * mu
        for j in combo:
            counts[j] += 1
        if any(c > cap for c, cap in zip(counts, caps)):
            continue
        selected = [profits[i][combo[i]] for i in range(n)]
        med = median(selected, domain="generalized").median
        key = (canonical_key(med), combo)
        if best is None or key < best[0]:
            best = (key, combo, med)
    if best is None:
        raise AssignmentError("no feasible full assignment under the caps")
    _, combo, med = best
    return MultisetAssignmentResult(tuple(combo), med)


def multibeam_schedule(angles: Mapping[Item, float],
                       beams: int) -> list[tuple[Item, ...]]:
    """Round-robin slots over angularly sorted nodes.

    Nodes are sorted by angle and cut into ``beams`` contiguous groups of
    k = ceil(n / beams); slot j serves the j-th member of every group, so
    simultaneous beams stay k positions apart in the angular order.
    """
    if beams < 1:
        raise AssignmentError("need at least one beam")
    if not angles:
        return []
    if any(not math.isfinite(a) for a in angles.values()):
        raise AssignmentError("angles must be finite")
    nodes = sorted(angles, key=lambda x: (angles[x], item_key(x)))
    n = len(nodes)
    k = math.ceil(n / beams)
    groups = [nodes[g * k:(g + 1) * k] for g in range(beams)]
    slots = []
    for j in range(k):
        slot = tuple(grp[j] for grp in groups if j < len(grp))
        slots.append(slot)
    return slots
