"""Quality measures for a clustering solution.

Total intra/inter proximity, cluster-size balance, region-size constraints,
unit-count modularity and the signed agreement/disagreement objective used
by correlation clustering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .core import (Dataset, Item, ModelError, Partition, ProximityMatrix,
                   SignedWeightedGraph, WeightedGraph)
from .multiset import MedianResult, MultisetEstimate, integrate_sum, median


class QualityError(ValueError):
    pass


def _pairs(cluster: Sequence[Item]):
    for i in range(len(cluster)):
        for j in range(i + 1, len(cluster)):
            yield cluster[i], cluster[j]


def _matrix_value(z: ProximityMatrix, u: Item, v: Item) -> float:
    val = z.get(u, v)
    if val is None:
        raise QualityError(f"proximity absent for pair ({u!r}, {v!r})")
    return val


def _aggregate(values: Sequence[float], mode: str) -> float:
    if mode in ("avg", "mean"):
        return sum(values) / len(values)
    if mode == "sum":
        return sum(values)
    if mode == "max":
        return max(values)
    if mode == "min":
        return min(values)
    raise QualityError(f"unknown aggregation mode {mode!r}")


def intra_quality(p: Partition, z: ProximityMatrix, cluster_mode: str = "avg",
                  total_mode: str = "mean") -> float:
    """Aggregate of per-cluster pairwise proximities; singletons count 0."""
    per_cluster = []
    for c in p.clusters:
        if len(c) < 2:
            per_cluster.append(0.0)
            continue
        ds = [_matrix_value(z, u, v) for u, v in _pairs(c)]
        per_cluster.append(_aggregate(ds, cluster_mode))
    return _aggregate(per_cluster, total_mode)


def inter_quality(p: Partition, z: ProximityMatrix, pair_mode: str = "avg",
                  total_mode: str = "mean") -> float:
    """Aggregate of cluster-pair proximities over all unordered pairs.

    The mean normalisation over ordered pairs equals the mean over
    unordered pairs because the pair proximity is symmetric.
    """
    if p.size < 2:
        raise QualityError("inter quality needs at least two clusters")
    vals = []
    for a, b in _pairs(p.clusters):
        ds = [_matrix_value(z, u, v) for u in a for v in b]
        vals.append(_aggregate(ds, pair_mode))
    return _aggregate(vals, total_mode)


def cluster_label_counts(cluster: Sequence[Item],
                         labels: Mapping[tuple[Item, Item], int],
                         scale: Sequence[int]) -> MultisetEstimate:
    """Level counts of all intra-cluster pair labels for one cluster."""
    pos = {lv: k for k, lv in enumerate(scale)}
    counts = [0] * len(scale)
    for u, v in _pairs(cluster):
        lab = labels.get((u, v), labels.get((v, u)))
        if lab is None:
            raise QualityError(f"missing label for pair ({u!r}, {v!r})")
        if lab not in pos:
            raise QualityError(f"label {lab} outside scale {list(scale)}")
        counts[pos[lab]] += 1
    return MultisetEstimate(tuple(counts))


def intra_quality_multiset(p: Partition,
                           labels: Mapping[tuple[Item, Item], int],
                           scale: Sequence[int],
                           total: str = "sum"):
    """Per-cluster label counts combined by componentwise sum or by median.

    Returns (per-cluster estimates, combined estimate); with ``total="median"``
    the combined value is the generalized-median result.
    """
    per = [cluster_label_counts(c, labels, scale)
           for c in p.clusters if len(c) >= 2]
    if not per:
        raise QualityError("no cluster with at least one labeled pair")
    if total == "sum":
        return per, integrate_sum(per)
    if total == "median":
        return per, median(per, domain="generalized")
    raise QualityError(f"unknown total mode {total!r}")


def inter_quality_multiset(p: Partition,
                           labels: Mapping[tuple[Item, Item], int],
                           scale: Sequence[int],
                           total: str = "sum"):
    """Cluster-pair label counts combined like :func:`intra_quality_multiset`."""
    pos = {lv: k for k, lv in enumerate(scale)}
    per = []
    for a, b in _pairs(p.clusters):
        counts = [0] * len(scale)
        for u in a:
            for v in b:
                lab = labels.get((u, v), labels.get((v, u)))
                if lab is None:
                    raise QualityError(f"missing label for pair ({u!r}, {v!r})")
                counts[pos[lab]] += 1
        per.append(MultisetEstimate(tuple(counts)))
    if not per:
        raise QualityError("need at least two clusters")
    if total == "sum":
        return per, integrate_sum(per)
    if total == "median":
        return per, median(per, domain="generalized")
    raise QualityError(f"unknown total mode {total!r}")


@dataclass(frozen=True)
class BalanceVector:
    """Counts of clusters per exact size deviation from the [lo, hi] bounds.

    Deviation 0 means conforming; -k / +k mean k elements under / over.
    """

    lo: int
    hi: int
    deviation_counts: tuple[tuple[int, int], ...]  # (deviation, count), ascending
    cluster_count: int

    def as_tuple(self) -> tuple[int, ...]:
        """Dense counts from the most-undersized to the most-oversized bin."""
        devs = dict(self.deviation_counts)
        lo_dev = min(devs) if devs else 0
        hi_dev = max(devs) if devs else 0
        lo_dev, hi_dev = min(lo_dev, 0), max(hi_dev, 0)
        return tuple(devs.get(d, 0) for d in range(lo_dev, hi_dev + 1))

    def count_in_bounds(self) -> int:
        return dict(self.deviation_counts).get(0, 0)


def balance_vector(p: Partition, lo: int, hi: int,
                   cluster_count_bounds: Optional[tuple[int, int]] = None) -> BalanceVector:
    """Classify every cluster by how far its size falls outside [lo, hi].

    ``cluster_count_bounds`` optionally checks the number of clusters as
    well; a violation raises since it is a hard external requirement.
    """
    if lo > hi:
        raise QualityError("size bounds must satisfy lo <= hi")
    devs: dict[int, int] = {}
    for c in p.clusters:
        s = len(c)
        d = s - hi if s > hi else (s - lo if s < lo else 0)
        devs[d] = devs.get(d, 0) + 1
    if cluster_count_bounds is not None:
        cl, ch = cluster_count_bounds
        if not cl <= p.size <= ch:
            raise QualityError(
                f"cluster count {p.size} outside bounds [{cl}, {ch}]")
    return BalanceVector(lo, hi, tuple(sorted(devs.items())), p.size)


def region_size_check(p: Partition, data: Dataset,
                      limits: Sequence[float]) -> dict[tuple[Item, ...], bool]:
    """Per-cluster check that every coordinate spread stays within its limit."""
    if len(limits) != data.m:
        raise QualityError("one limit per parameter required")
    if any(not d > 0 for d in limits):
        raise QualityError("limits must be positive")
    out = {}
    for c in p.clusters:
        vecs = [data.vector(it) for it in c]
        ok = all(max(col) - min(col) <= lim
                 for col, lim in zip(zip(*vecs), limits))
        out[c] = ok
    return out


@dataclass(frozen=True)
class ClusterModularity:
    internal_edges: int
    external_edges: int
    edge_fraction: float       # e = internal / |E|
    endpoint_fraction: float   # a = (internal + external) / |E|

    @property
    def term(self) -> float:
        return self.edge_fraction - self.endpoint_fraction ** 2


@dataclass(frozen=True)
class ModularityResult:
    total: float
    per_cluster: tuple[ClusterModularity, ...]
    edge_count: int


def modularity_terms(counts: Sequence[tuple[int, int]],
                     edge_count: int) -> ModularityResult:
    """Modularity from explicit per-cluster (internal, external) edge counts."""
    if edge_count < 1:
        raise QualityError("modularity needs at least one edge")
    per = []
    for internal, external in counts:
        e = internal / edge_count
        a = (internal + external) / edge_count
        per.append(ClusterModularity(internal, external, e, a))
    return ModularityResult(sum(c.term for c in per), tuple(per), edge_count)


def modularity(g: WeightedGraph, p: Partition) -> ModularityResult:
    """Unit-edge-count modularity of a partition over the graph vertices."""
    if g.p < 1:
        raise QualityError("modularity needs at least one edge")
    where = {}
    for k, c in enumerate(p.clusters):
        for v in c:
            where[v] = k
    counts = [[0, 0] for _ in p.clusters]
    for u, v, _ in g.edges:
        cu, cv = where[u], where[v]
        if cu == cv:
            counts[cu][0] += 1
        else:
            counts[cu][1] += 1
            counts[cv][1] += 1
    return modularity_terms([tuple(c) for c in counts], g.p)


@dataclass(frozen=True)
class CorrelationScore:
    """Signed intra-cluster weight totals; each intra edge counted once."""

    disagreement: float  # sum of negative intra-cluster weights, <= 0
    agreement: float     # sum of positive intra-cluster weights, >= 0

    def as_tuple(self) -> tuple[float, float]:
        return (self.disagreement, self.agreement)


def correlation_objective(g: SignedWeightedGraph, p: Partition) -> CorrelationScore:
    where = {}
    for k, c in enumerate(p.clusters):
        for v in c:
            where[v] = k
    neg = pos = 0.0
    for u, v, w in g.edges:
        if where[u] == where[v]:
            if w < 0:
                neg += w
            else:
                pos += w
    return CorrelationScore(neg, pos)
