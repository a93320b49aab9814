"""Graph-structured clustering algorithms.

Minimum-spanning-tree clustering and its adaptive-threshold variant,
exact maximum-clique extraction with clique-series clustering, the greedy
Pareto heuristic for weighted correlation clustering, greedy modularity
agglomeration and Girvan-Newman edge-betweenness splitting.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .agglomerative import BalancedResult, agglomerative_balanced
from .core import (Dataset, Item, ModelError, Partition, ProximityMatrix,
                   SignedWeightedGraph, WeightedGraph, item_key)
from .proximity import Metric, OrdinalMappingRule, proximity_matrix
from .quality import CorrelationScore, ModularityResult, correlation_objective, modularity

CLIQUE_GUARD = 64


class GraphClusteringError(ValueError):
    pass


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def connected_components(g: WeightedGraph) -> list[frozenset[Item]]:
    uf = _UnionFind(g.vertices)
    for u, v, _ in g.edges:
        uf.union(u, v)
    groups: dict[Item, set[Item]] = {}
    for v in g.vertices:
        groups.setdefault(uf.find(v), set()).add(v)
    return sorted((frozenset(s) for s in groups.values()),
                  key=lambda s: min(item_key(x) for x in s))


def minimum_spanning_tree(g: WeightedGraph) -> WeightedGraph:
    """Kruskal MST; weight ties break by smallest endpoint pair."""
    comps = connected_components(g)
    if len(comps) != 1:
        raise GraphClusteringError(
            f"graph is disconnected ({len(comps)} components: "
            f"{[sorted(c, key=item_key) for c in comps]})")
    edges = sorted(g.edges, key=lambda e: (e[2], item_key(e[0]), item_key(e[1])))
    uf = _UnionFind(g.vertices)
    chosen = []
    for u, v, w in edges:
        if uf.union(u, v):
            chosen.append((u, v, w))
            if len(chosen) == g.n - 1:
                break
    return WeightedGraph.build(g.vertices, chosen)


def _matrix_from_tree(tree: WeightedGraph) -> ProximityMatrix:
    return ProximityMatrix.from_pairs(
        tuple(sorted(tree.vertices, key=item_key)),
        {(u, v): w for u, v, w in tree.edges})


def cluster_tree(tree: WeightedGraph, size_cap: int, linkage: str = "single",
                 min_size: int = 1) -> BalancedResult:
    """Balanced agglomeration allowed to merge along tree edges only."""
    return agglomerative_balanced(_matrix_from_tree(tree), size_cap,
                                  linkage=linkage, min_size=min_size)


def mst_clustering(z: ProximityMatrix, size_cap: int,
                   linkage: str = "single") -> BalancedResult:
    """Graph from the finite proximities, its MST, balanced tree clustering."""
    g = WeightedGraph.build(z.items, z.present_pairs())
    tree = minimum_spanning_tree(g)
    return cluster_tree(tree, size_cap, linkage=linkage)


@dataclass(frozen=True)
class AdaptiveMstResult:
    partition: Partition
    delta_used: int
    tree: WeightedGraph
    ordinal_rule: OrdinalMappingRule


def adaptive_mst_clustering(data: Dataset, buckets: int, min_size: int,
                            size_cap: int,
                            metric: Metric = Metric()) -> AdaptiveMstResult:
    """Quantise proximities into equal-width ordinal levels, grow the level
    threshold until the graph connects, then cluster the MST under the
    size bounds."""
    if buckets < 2:
        raise GraphClusteringError("need at least two ordinal buckets")
    z = proximity_matrix(data, metric)
    vals = [w for _, _, w in z.present_pairs()]
    if not vals:
        partition = Partition.of(*[(x,) for x in data.items])
        dummy = WeightedGraph.build(data.items, [])
        rule = OrdinalMappingRule.equal_width(0.0, 1.0, buckets)
        return AdaptiveMstResult(partition, 0, dummy, rule)
    lo, hi = min(vals), max(vals)
    if hi == lo:
        hi = lo + 1.0
    rule = OrdinalMappingRule.equal_width(lo, hi, buckets)
    levels = {(u, v): rule.level(w) for u, v, w in z.present_pairs()}
    for delta in range(1, buckets + 1):
        edges = [(u, v, z.get(u, v)) for (u, v), lv in levels.items()
                 if lv < delta]
        g = WeightedGraph.build(data.items, edges)
        if len(connected_components(g)) == 1:
            tree = minimum_spanning_tree(g)
            res = cluster_tree(tree, size_cap, min_size=min_size)
            return AdaptiveMstResult(res.partition, delta, tree, rule)
    raise GraphClusteringError("finite proximities do not connect the items")


def maximum_clique(g: WeightedGraph) -> tuple[Item, ...]:
    """Exact maximum clique by branch and bound with greedy colour bounds.

    Ties resolve to the lexicographically smallest vertex set. Guarded to
    desk-scale graphs.
    """
    if g.n > CLIQUE_GUARD:
        raise GraphClusteringError(f"clique search limited to {CLIQUE_GUARD} vertices")
    if g.n == 0:
        return ()
    adj = {u: set(nb) for u, nb in ((v, d.keys()) for v, d in g.adjacency().items())}
    order = sorted(g.vertices, key=item_key)
    best: list[Item] = []

    def colour_bound(cands: list[Item]) -> int:
        colours: list[set[Item]] = []
        for v in cands:
            for cls in colours:
                if not (adj[v] & cls):
                    cls.add(v)
                    break
            else:
                colours.append({v})
        return len(colours)

    def expand(current: list[Item], cands: list[Item]):
        nonlocal best
        if not cands:
            if len(current) > len(best) or (
                    len(current) == len(best) and
                    [item_key(x) for x in sorted(current, key=item_key)]
                    < [item_key(x) for x in sorted(best, key=item_key)]):
                best = list(current)
            return
        if len(current) + colour_bound(cands) < len(best):
            return
        for k, v in enumerate(cands):
            rest = [u for u in cands[k + 1:] if u in adj[v]]
            if len(current) + 1 + len(rest) < len(best):
                continue
            expand(current + [v], rest)

    expand([], order)
    return tuple(sorted(best, key=item_key))


def clique_clustering(g: WeightedGraph) -> Partition:
    """Extract a maximum clique, retire its vertices, repeat."""
    remaining = list(g.vertices)
    adj = g.adjacency()
    clusters = []
    while remaining:
        sub_edges = [(u, v, w) for u, v, w in g.edges
                     if u in remaining and v in remaining]
        sub = WeightedGraph.build(tuple(remaining), sub_edges)
        clique = maximum_clique(sub)
        clusters.append(clique)
        remaining = [v for v in remaining if v not in clique]
    return Partition.of(*clusters)


@dataclass(frozen=True)
class ParetoTracePoint:
    iteration: int
    objective: tuple[float, float]  # (disagreement, agreement)
    merged_pair: tuple[tuple[Item, ...], tuple[Item, ...]]
    improvement: tuple[float, float]
    efficient_set: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class CorrelationGreedyResult:
    partition: Partition
    trace: tuple[ParetoTracePoint, ...]
    objective: CorrelationScore


def correlation_greedy(g: SignedWeightedGraph,
                       disagreement_budget: float) -> CorrelationGreedyResult:
    """Greedy agglomeration maximising intra-cluster agreement under a
    disagreement budget.

    From singletons, every cluster-pair merge is scored by its improvement
    vector (disagreement gain <= 0, agreement gain). The Pareto-efficient
    improvements are formed; the selected merge is the one with zero
    disagreement gain and maximal agreement gain if such exists, otherwise
    the one with the best agreement gain per unit of disagreement gain
    (ties by agreement gain). Stops when no merge has a positive agreement
    gain within the budget.
    """
    if disagreement_budget < 0:
        raise GraphClusteringError("disagreement budget must be nonnegative")
    adj = g.adjacency()
    clusters: list[tuple[Item, ...]] = [(v,) for v in sorted(g.vertices, key=item_key)]
    dis = 0.0
    agr = 0.0
    trace: list[ParetoTracePoint] = []
    iteration = 0
    while len(clusters) > 1:
        candidates = []
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                a, b = clusters[i], clusters[j]
                dneg = dpos = 0.0
                for u in a:
                    row = adj[u]
                    for v in b:
                        w = row.get(v)
                        if w is None:
                            continue
                        if w < 0:
                            dneg += w
                        else:
                            dpos += w
                if dpos <= 0:
                    continue
                if abs(dis + dneg) > disagreement_budget:
                    continue
                candidates.append(((dneg, dpos), i, j))
        if not candidates:
            break
        efficient = []
        for (dneg, dpos), i, j in candidates:
            dominated = any(
                (od >= dneg and op >= dpos) and (od > dneg or op > dpos)
                for (od, op), _, _ in candidates)
            if not dominated:
                efficient.append(((dneg, dpos), i, j))
        zero = [c for c in efficient if c[0][0] == 0]
        if zero:
            sel = max(zero, key=lambda c: (c[0][1], -c[1], -c[2]))
        else:
            sel = max(efficient,
                      key=lambda c: (c[0][1] / abs(c[0][0]), c[0][1], -c[1], -c[2]))
        (dneg, dpos), i, j = sel
        a, b = clusters[i], clusters[j]
        merged = tuple(sorted(a + b, key=item_key))
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append(merged)
        dis += dneg
        agr += dpos
        iteration += 1
        trace.append(ParetoTracePoint(
            iteration, (dis, agr), (a, b), (dneg, dpos),
            tuple(sorted(c[0] for c in efficient))))
    partition = Partition.of(*clusters) if clusters else Partition.of(
        *[(v,) for v in g.vertices])
    return CorrelationGreedyResult(
        partition, tuple(trace), correlation_objective(g, partition))


@dataclass(frozen=True)
class ModularityGreedyResult:
    partition: Partition
    merges: tuple[tuple[tuple[Item, ...], tuple[Item, ...], float], ...]
    modularity: ModularityResult


def modularity_greedy(g: WeightedGraph) -> ModularityGreedyResult:
    """Agglomerate from singletons while some merge strictly raises
    modularity; ties by smallest cluster keys."""
    if g.p < 1:
        raise GraphClusteringError("modularity needs at least one edge")
    clusters: list[tuple[Item, ...]] = [(v,) for v in sorted(g.vertices, key=item_key)]
    merges = []

    def q_of(cs: Sequence[tuple[Item, ...]]) -> float:
        return modularity(g, Partition.of(*cs)).total

    current = q_of(clusters)
    while len(clusters) > 1:
        best = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                trial = [c for k, c in enumerate(clusters) if k not in (i, j)]
                merged = tuple(sorted(clusters[i] + clusters[j], key=item_key))
                trial.append(merged)
                q = q_of(trial)
                key = (-q, tuple(item_key(x) for x in clusters[i]),
                       tuple(item_key(x) for x in clusters[j]))
                if best is None or key < best[0]:
                    best = (key, i, j, q)
        _, i, j, q = best
        if q <= current:
            break
        merges.append((clusters[i], clusters[j], q))
        merged = tuple(sorted(clusters[i] + clusters[j], key=item_key))
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append(merged)
        current = q
    partition = Partition.of(*clusters)
    return ModularityGreedyResult(partition, tuple(merges), modularity(g, partition))


def edge_betweenness(g: WeightedGraph) -> dict[tuple[Item, Item], float]:
    """Shortest-path betweenness per edge, unweighted path counts.

    Each unordered vertex pair contributes once; equal-length paths split
    the contribution fractionally (Brandes accumulation).
    """
    adj = {v: sorted(nbrs, key=item_key) for v, nbrs in
           ((u, list(d)) for u, d in g.adjacency().items())}
    scores = {(u, v): 0.0 for u, v, _ in g.edges}

    for s in g.vertices:
        # BFS shortest-path counts
        dist = {s: 0}
        sigma = {v: 0.0 for v in g.vertices}
        sigma[s] = 1.0
        preds: dict[Item, list[Item]] = {v: [] for v in g.vertices}
        order = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        # dependency accumulation
        delta = {v: 0.0 for v in g.vertices}
        for w in reversed(order):
            for v in preds[w]:
                share = sigma[v] / sigma[w] * (1.0 + delta[w])
                a, b = (v, w) if item_key(v) <= item_key(w) else (w, v)
                scores[(a, b)] += share
                delta[v] += share
    return {e: s / 2.0 for e, s in scores.items()}


@dataclass(frozen=True)
class GirvanNewmanResult:
    partition: Partition
    removed: tuple[tuple[Item, Item], ...]


def girvan_newman(g: WeightedGraph, target_components: int) -> GirvanNewmanResult:
    """Remove the highest-betweenness edge (ties by smallest endpoints)
    until the component count reaches the target."""
    if target_components > g.n:
        raise GraphClusteringError("cannot exceed one component per vertex")
    current = g
    removed = []
    comps = connected_components(current)
    if target_components < len(comps):
        raise GraphClusteringError(
            f"graph already has {len(comps)} components")
    while len(comps) < target_components:
        if not current.edges:
            break
        scores = edge_betweenness(current)
        # deterministic max: highest score, then smallest endpoint pair
        best_edge = None
        best_score = None
        for e, s in scores.items():
            key = (-s, item_key(e[0]), item_key(e[1]))
            if best_edge is None or key < best_score:
                best_edge, best_score = e, key
        u, v = best_edge
        removed.append((u, v))
        current = WeightedGraph.build(
            current.vertices,
            [(a, b, w) for a, b, w in current.edges if (a, b) != (u, v)])
        comps = connected_components(current)
    return GirvanNewmanResult(Partition.of(*comps), tuple(removed))
