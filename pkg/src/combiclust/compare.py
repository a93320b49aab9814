"""Distances between clustering solutions, rankings and hierarchies,
and consensus-partition search.

The partition edit cost follows a greedy max-intersection matching: clusters
are paired off by descending overlap and every element of the paired target
cluster is pulled into the matched source cluster, counting one relocation
per moved element.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Optional, Sequence

from .core import Hierarchy, Item, ModelError, Partition, Ranking, item_key


class CompareError(ValueError):
    pass


@dataclass(frozen=True)
class EditTrace:
    """Relocations turning the source partition into the target.

    ``moves`` are (item, from-cluster-index, to-cluster-index) over the
    working cluster list, in execution order; ``matching`` pairs source
    cluster indices with target cluster indices.
    """

    cost: int
    moves: tuple[tuple[Item, int, int], ...]
    matching: tuple[tuple[int, int], ...]
    source: Partition
    target: Partition

    def replay(self) -> Partition:
        """Re-apply the recorded moves to the source partition."""
        work = [set(c) for c in self.source.clusters]
        padding = max((to for _, _, to in self.moves), default=-1) - len(work) + 1
        work.extend(set() for _ in range(max(0, padding)))
        for item, frm, to in self.moves:
            # item may have been moved already; remove from wherever it is
            for c in work:
                c.discard(item)
            work[to].add(item)
        return Partition.of(*[c for c in work if c],
                            universe=self.source.universe)


def partition_edit_cost(x1: Partition, x2: Partition) -> EditTrace:
    """Greedy relocation count for transforming x1 into x2.

    Repeatedly matches the cluster pair with the largest intersection
    (ties: lowest source index, then lowest target index), moves every
    member of the matched target cluster into the matched source cluster,
    and retires the pair. The result is an upper bound on the optimal
    relocation count.
    """
    if x1.universe != x2.universe:
        raise CompareError("partitions cover different universes")
    work = [set(c) for c in x1.clusters]
    targets = [frozenset(c) for c in x2.clusters]
    while len(work) < len(targets):
        work.append(set())

    live_rows = list(range(len(work)))
    live_cols = list(range(len(targets)))
    moves: list[tuple[Item, int, int]] = []
    matching: list[tuple[int, int]] = []
    cost = 0
    while live_cols and live_rows:
        best = max(
            ((len(work[r] & targets[c]), -r, -c, r, c)
             for r in live_rows for c in live_cols),
            key=lambda t: t[:3])
        _, _, _, r, c = best
        matching.append((r, c))
        for item in sorted(targets[c] - work[r], key=item_key):
            frm = next(k for k, cl in enumerate(work) if item in cl)
            work[frm].discard(item)
            work[r].add(item)
            moves.append((item, frm, r))
            cost += 1
        live_rows.remove(r)
        live_cols.remove(c)
    return EditTrace(cost, tuple(moves), tuple(sorted(matching)), x1, x2)


def min_relocations(x1: Partition, x2: Partition) -> int:
    """Exact minimum relocation count over all cluster matchings.

    Exhaustive over matchings; intended as a small-n oracle.
    """
    if x1.universe != x2.universe:
        raise CompareError("partitions cover different universes")
    n = len(x1.universe)
    src = [frozenset(c) for c in x1.clusters]
    dst = [frozenset(c) for c in x2.clusters]
    width = max(len(src), len(dst))
    src += [frozenset()] * (width - len(src))
    dst += [frozenset()] * (width - len(dst))
    best = None
    for perm in permutations(range(width)):
        overlap = sum(len(src[i] & dst[perm[i]]) for i in range(width))
        cand = n - overlap
        best = cand if best is None else min(best, cand)
    return best


def ranking_distance(r1: Ranking, r2: Ranking) -> int:
    """Sum over items of the absolute layer-index difference."""
    if r1.universe != r2.universe:
        raise CompareError("rankings cover different universes")
    return sum(abs(r1.layer_of(x) - r2.layer_of(x)) for x in r1.universe)


def ranking_vector_proximity(r1: Ranking, r2: Ranking) -> tuple[int, ...]:
    """Histogram of per-item layer shifts over kappa = -(n-1) .. n-1.

    The shift of an item is its layer in r1 minus its layer in r2, so a
    positive value means the item improved.
    """
    if r1.universe != r2.universe:
        raise CompareError("rankings cover different universes")
    n = len(r1.universe)
    counts = [0] * (2 * (n - 1) + 1)
    for x in r1.universe:
        shift = r1.layer_of(x) - r2.layer_of(x)
        counts[shift + (n - 1)] += 1
    return tuple(counts)


def hierarchy_edit_distance(h1: Hierarchy, h2: Hierarchy) -> int:
    """Arc additions plus deletions: size of the symmetric arc-set difference."""
    return len(h1.arcs ^ h2.arcs)


def hierarchical_clustering_distance(hc1: tuple[Partition, Hierarchy],
                                     hc2: tuple[Partition, Hierarchy]) -> tuple[int, int]:
    """Two-component proximity: (partition edit cost, hierarchy edit distance)."""
    p1, h1 = hc1
    p2, h2 = hc2
    return (partition_edit_cost(p1, p2).cost, hierarchy_edit_distance(h1, h2))


def _restricted_growth_partitions(items: Sequence[Item], min_k: int,
                                  max_k: int) -> Iterable[Partition]:
    """All set partitions with a block count in [min_k, max_k]."""
    n = len(items)
    if n == 0:
        return
    codes = [0] * n

    def rec(i: int, used: int):
        if i == n:
            if min_k <= used <= max_k:
                blocks: list[list[Item]] = [[] for _ in range(used)]
                for k, it in enumerate(items):
                    blocks[codes[k]].append(it)
                yield Partition.of(*blocks)
            return
        # restricted growth: next code is 0..used, capped by max_k blocks
        for c in range(min(used + 1, max_k)):
            codes[i] = c
            yield from rec(i + 1, max(used, c + 1))

    yield from rec(1, 1)


@dataclass(frozen=True)
class ConsensusResult:
    partition: Partition
    per_input_costs: tuple[int, ...]
    total_cost: int
    candidates_examined: int


def consensus_costs(solutions: Sequence[Partition],
                    candidate: Partition) -> tuple[int, ...]:
    """Edit cost from each input solution to the candidate."""
    return tuple(partition_edit_cost(s, candidate).cost for s in solutions)


def _partition_sort_key(p: Partition):
    return (p.size, tuple(tuple(item_key(x) for x in c) for c in p.clusters))


def consensus_partition(solutions: Sequence[Partition], min_clusters: int,
                        max_clusters: int, mode: str = "exhaustive",
                        guard: int = 10 ** 6) -> ConsensusResult:
    """Partition minimising total edit cost from the inputs.

    ``exhaustive`` enumerates every set partition within the cluster-count
    bounds (restricted-growth order); ``greedy`` starts from the input that
    is cheapest to the others and hill-climbs single-item relocations.
    Ties break by fewest clusters, then canonical cluster order.
    """
    if not solutions:
        raise CompareError("no input solutions")
    universe = solutions[0].universe
    if any(s.universe != universe for s in solutions):
        raise CompareError("input solutions cover different universes")
    items = sorted(universe, key=item_key)

    if mode == "exhaustive":
        # Bell-ish growth; refuse absurd instances before enumerating.
        if len(items) > 14:
            raise CompareError("exhaustive consensus limited to 14 items")
        best: Optional[tuple] = None
        examined = 0
        for cand in _restricted_growth_partitions(items, min_clusters, max_clusters):
            examined += 1
            if examined > guard:
                raise CompareError("exhaustive consensus guard exceeded")
            costs = consensus_costs(solutions, cand)
            key = (sum(costs), _partition_sort_key(cand))
            if best is None or key < best[0]:
                best = (key, cand, costs)
        if best is None:
            raise CompareError("no admissible candidate partition")
        _, cand, costs = best
        return ConsensusResult(cand, costs, sum(costs), examined)

    if mode == "greedy":
        def total(p: Partition) -> int:
            return sum(consensus_costs(solutions, p))

        seeds = [s for s in solutions if min_clusters <= s.size <= max_clusters]
        if not seeds:
            seeds = list(solutions)
        current = min(seeds, key=lambda s: (total(s), _partition_sort_key(s)))
        examined = len(seeds)
        improved = True
        while improved:
            improved = False
            base = total(current)
            for item in items:
                blocks = [set(c) for c in current.clusters]
                src = next(k for k, b in enumerate(blocks) if item in b)
                slots = list(range(len(blocks))) + [len(blocks)]
                for to in slots:
                    if to == src:
                        continue
                    new_blocks = [set(b) for b in blocks]
                    new_blocks[src].discard(item)
                    if to == len(blocks):
                        new_blocks.append({item})
                    else:
                        new_blocks[to].add(item)
                    new_blocks = [b for b in new_blocks if b]
                    if not min_clusters <= len(new_blocks) <= max_clusters:
                        continue
                    cand = Partition.of(*new_blocks)
                    examined += 1
                    if total(cand) < base:
                        current, improved = cand, True
                        break
                if improved:
                    break
        costs = consensus_costs(solutions, current)
        return ConsensusResult(current, costs, sum(costs), examined)

    raise CompareError(f"unknown consensus mode {mode!r}")
