"""Hierarchical agglomerative clustering.

Variants: the basic bottom-up scheme producing a full dendrogram, the
size-balanced scheme that freezes clusters at a cardinality cap, the
ordinal concurrent-merge scheme producing a hierarchy with shared
sub-elements, and a balanced scheme driven by multiset proximity
estimates on a lattice scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .core import (Dataset, Hierarchy, Item, ModelError, Partition,
                   ProximityMatrix, item_key)
from .multiset import MultisetEstimate, canonical_key, median
from .proximity import Metric, pair_distance


class AgglomerativeError(ValueError):
    pass


@dataclass(frozen=True)
class MergeEvent:
    first: tuple[Item, ...]
    second: tuple[Item, ...]
    linkage_value: float
    merged: tuple[Item, ...]


@dataclass(frozen=True)
class MergeTrace:
    events: tuple[MergeEvent, ...]
    final: Partition

    def replay(self, universe: Sequence[Item]) -> Partition:
        """Re-run the recorded merges from singletons."""
        clusters = {frozenset([x]) for x in universe}
        for ev in self.events:
            a, b = frozenset(ev.first), frozenset(ev.second)
            if a not in clusters or b not in clusters:
                raise AgglomerativeError("trace does not replay")
            clusters.remove(a)
            clusters.remove(b)
            clusters.add(a | b)
        return Partition.of(*clusters)


def _linkage(z: ProximityMatrix, a: Sequence[Item], b: Sequence[Item],
             kind: str) -> Optional[float]:
    """Linkage value between two clusters, or None when undefined.

    Single linkage ignores absent pair proximities (min over the finite
    ones); complete and average need every cross pair present.
    """
    vals = []
    finite = 0
    for u in a:
        for v in b:
            w = z.get(u, v)
            if w is not None:
                vals.append(w)
                finite += 1
    total = len(a) * len(b)
    if kind == "single":
        return min(vals) if vals else None
    if kind == "complete":
        return max(vals) if finite == total else None
    if kind == "average":
        return sum(vals) / total if finite == total else None
    raise AgglomerativeError(f"unknown linkage {kind!r}")


def _cluster_key(c: Sequence[Item]) -> tuple:
    return tuple(item_key(x) for x in sorted(c, key=item_key))


def _best_pair(z: ProximityMatrix, clusters: list[tuple[Item, ...]],
               linkage: str, reps: Optional[dict] = None,
               metric: Optional[Metric] = None,
               size_cap: Optional[int] = None):
    """Globally minimal mergeable pair; ties by smallest cluster keys."""
    best = None
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            a, b = clusters[i], clusters[j]
            if size_cap is not None and len(a) + len(b) > size_cap:
                continue
            if linkage == "centroid":
                val = pair_distance(reps[a], reps[b], metric)
            else:
                val = _linkage(z, a, b, linkage)
            if val is None:
                continue
            key = (val, _cluster_key(a), _cluster_key(b))
            if best is None or key < best[0]:
                best = (key, i, j, val)
    return best


def agglomerative_basic(z: ProximityMatrix, linkage: str = "single",
                        data: Optional[Dataset] = None,
                        metric: Metric = Metric()) -> MergeTrace:
    """Full dendrogram: n-1 merges of the globally closest cluster pair.

    ``centroid`` linkage tracks a representative point per cluster,
    replacing merged representatives by their midpoint; it needs the
    source dataset coordinates.
    """
    clusters = [(x,) for x in z.items]
    reps = None
    if linkage == "centroid":
        if data is None:
            raise AgglomerativeError("centroid linkage needs dataset coordinates")
        reps = {(x,): tuple(map(float, data.vector(x))) for x in z.items}
    events = []
    while len(clusters) > 1:
        found = _best_pair(z, clusters, linkage, reps, metric)
        if found is None:
            raise AgglomerativeError(
                "required proximity absent under the chosen linkage")
        _, i, j, val = found
        a, b = clusters[i], clusters[j]
        merged = tuple(sorted(a + b, key=item_key))
        if reps is not None:
            reps[merged] = tuple((p + q) / 2 for p, q in zip(reps[a], reps[b]))
        events.append(MergeEvent(a, b, val, merged))
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append(merged)
    return MergeTrace(tuple(events), Partition.of(*clusters))


@dataclass(frozen=True)
class BalancedResult:
    partition: Partition
    trace: MergeTrace
    undersized: tuple[tuple[Item, ...], ...]  # leftovers below the min size


def agglomerative_balanced(z: ProximityMatrix, size_cap: int,
                           linkage: str = "single", min_size: int = 1,
                           data: Optional[Dataset] = None,
                           metric: Metric = Metric()) -> BalancedResult:
    """Agglomerate while freezing every cluster that reaches ``size_cap``.

    A merge that would overshoot the cap is skipped in favour of the next
    best pair. When no mergeable pair remains, the active clusters are
    emitted as they stand; those below ``min_size`` are flagged.
    """
    if size_cap < 1:
        raise AgglomerativeError("size cap must be at least 1")
    active = [(x,) for x in z.items]
    frozen: list[tuple[Item, ...]] = []
    reps = None
    if linkage == "centroid":
        if data is None:
            raise AgglomerativeError("centroid linkage needs dataset coordinates")
        reps = {(x,): tuple(map(float, data.vector(x))) for x in z.items}
    # clusters already at the cap never take part in merging
    for c in list(active):
        if len(c) >= size_cap:
            active.remove(c)
            frozen.append(c)
    events = []
    while len(active) > 1:
        found = _best_pair(z, active, linkage, reps, metric, size_cap=size_cap)
        if found is None:
            break
        _, i, j, val = found
        a, b = active[i], active[j]
        merged = tuple(sorted(a + b, key=item_key))
        if reps is not None:
            reps[merged] = tuple((p + q) / 2 for p, q in zip(reps[a], reps[b]))
        events.append(MergeEvent(a, b, val, merged))
        active = [c for k, c in enumerate(active) if k not in (i, j)]
        if len(merged) >= size_cap:
            frozen.append(merged)
        else:
            active.append(merged)
    leftovers = list(active)
    partition = Partition.of(*(frozen + leftovers))
    undersized = tuple(c for c in leftovers if len(c) < min_size)
    return BalancedResult(partition, MergeTrace(tuple(events), partition),
                          undersized)


def _ordinal_min_pairs(levels: Mapping[tuple[Item, Item], int],
                       nodes: Sequence[Item],
                       members: Mapping[Item, frozenset],
                       pair_cap: int):
    """Cross-node pairs at the minimal ordinal level, capped in number."""
    best_level = None
    pairs = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            a, b = nodes[i], nodes[j]
            vals = [levels.get((u, v), levels.get((v, u)))
                    for u in members[a] for v in members[b]]
            vals = [v for v in vals if v is not None]
            if not vals:
                continue
            lv = min(vals)
            if best_level is None or lv < best_level:
                best_level = lv
                pairs = [(a, b)]
            elif lv == best_level:
                pairs.append((a, b))
    pairs.sort(key=lambda p: (_cluster_key(members[p[0]]), _cluster_key(members[p[1]])))
    return best_level, pairs[:pair_cap]


def agglomerative_ordinal(levels: Mapping[tuple[Item, Item], int],
                          items: Sequence[Item],
                          pair_cap: int = 8,
                          max_rounds: Optional[int] = None) -> Hierarchy:
    """Concurrent merging at the minimal ordinal proximity level.

    All node pairs at the current minimal level (up to ``pair_cap`` per
    round) merge at once; merge groups are the maximal cliques of the
    minimal-pair graph, so a node lying in several minimal pairs joins
    several parents and the result is a DAG-shaped hierarchy.
    """
    if pair_cap < 1:
        raise AgglomerativeError("pair cap must be at least 1")
    nodes: list[Item] = list(items)
    members: dict[Item, frozenset] = {x: frozenset([x]) for x in items}
    arcs: set[tuple[Item, Item]] = set()
    all_nodes: list[Item] = list(items)
    counter = 0
    rounds = 0
    while len(nodes) > 1 and (max_rounds is None or rounds < max_rounds):
        level, pairs = _ordinal_min_pairs(levels, nodes, members, pair_cap)
        if level is None or not pairs:
            break
        rounds += 1
        groups = _maximal_cliques_of_pairs(pairs)
        consumed = set()
        new_nodes = []
        for group in groups:
            counter += 1
            parent = f"g{counter}"
            member_union = frozenset().union(*(members[u] for u in group))
            members[parent] = member_union
            all_nodes.append(parent)
            new_nodes.append(parent)
            for child in group:
                arcs.add((parent, child))
                consumed.add(child)
        nodes = [u for u in nodes if u not in consumed] + new_nodes
    return Hierarchy(tuple(all_nodes), frozenset(arcs), allow_dag=True)


def _maximal_cliques_of_pairs(pairs: Sequence[tuple[Item, Item]]):
    """Maximal cliques of the graph formed by the given pairs (small n)."""
    adj: dict[Item, set[Item]] = {}
    for u, v in pairs:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    verts = sorted(adj, key=item_key)
    cliques: list[tuple[Item, ...]] = []

    def bron(r: set, p: set, x: set):
        if not p and not x:
            cliques.append(tuple(sorted(r, key=item_key)))
            return
        for v in sorted(p, key=item_key):
            bron(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    bron(set(), set(verts), set())
    cliques.sort(key=lambda c: tuple(repr(x) for x in c))
    return cliques


@dataclass(frozen=True)
class MultisetMergeEvent:
    first: tuple[Item, ...]
    second: tuple[Item, ...]
    linkage: MultisetEstimate
    merged: tuple[Item, ...]
    round_index: int


@dataclass(frozen=True)
class MultisetBalancedResult:
    partition: Partition
    events: tuple[MultisetMergeEvent, ...]
    rounds: int


def multiset_balanced_agglomeration(
        estimates: Mapping[tuple[Item, Item], MultisetEstimate],
        items: Sequence[Item], size_cap: int,
        max_rounds: Optional[int] = None) -> MultisetBalancedResult:
    """Balanced agglomeration driven by lattice-valued pair proximities.

    Cluster-pair linkage is the generalized median of all cross-pair
    estimates (ties toward the best-most estimate). Pairs are ranked by
    the canonical lattice position of that median, then by the median's
    total step distance (coherence), then by member order. Exactly tied,
    pairwise-disjoint pairs merge concurrently in one round; a cluster
    reaching ``size_cap`` freezes. ``max_rounds`` bounds the number of
    merge rounds (None = run until no admissible merge remains).
    """
    if size_cap < 1:
        raise AgglomerativeError("size cap must be at least 1")

    def cross_median(a: Sequence[Item], b: Sequence[Item]):
        vals = []
        for u in a:
            for v in b:
                e = estimates.get((u, v), estimates.get((v, u)))
                if e is None:
                    return None
                vals.append(e)
        res = median(vals, domain="generalized")
        return res

    active: list[tuple[Item, ...]] = [(x,) for x in items]
    frozen: list[tuple[Item, ...]] = []
    for c in list(active):
        if len(c) >= size_cap:
            active.remove(c)
            frozen.append(c)
    events: list[MultisetMergeEvent] = []
    rounds = 0
    while len(active) > 1 and (max_rounds is None or rounds < max_rounds):
        ranked = []
        for i in range(len(active)):
            for j in range(i + 1, len(active)):
                a, b = active[i], active[j]
                if len(a) + len(b) > size_cap:
                    continue
                res = cross_median(a, b)
                if res is None:
                    continue
                key = (canonical_key(res.median), res.cost,
                       _cluster_key(a), _cluster_key(b))
                ranked.append((key, a, b, res.median))
        if not ranked:
            break
        ranked.sort(key=lambda t: t[0])
        rounds += 1
        top_rank = ranked[0][0][:2]
        used: set[tuple[Item, ...]] = set()
        merged_any = False
        for key, a, b, est in ranked:
            if key[:2] != top_rank:
                break
            if a in used or b in used:
                continue
            merged = tuple(sorted(a + b, key=item_key))
            events.append(MultisetMergeEvent(a, b, est, merged, rounds))
            used.update((a, b))
            active = [c for c in active if c not in (a, b)]
            if len(merged) >= size_cap:
                frozen.append(merged)
            else:
                active.append(merged)
            merged_any = True
        if not merged_any:
            break
    partition = Partition.of(*(frozen + list(active)))
    return MultisetBalancedResult(partition, tuple(events), rounds)
