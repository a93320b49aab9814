"""Pairwise and set-level proximity computations plus scale transformations.

Covers point-point metrics, point-cluster and cluster-cluster aggregates,
quantitative-to-ordinal mapping rules, and construction of proximity
matrices / threshold graphs from datasets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import median as _stat_median
from typing import Iterable, Optional, Sequence

from .core import Dataset, Item, ModelError, ProximityMatrix, WeightedGraph
from .multiset import MultisetEstimate

Vector = Sequence[float]


class ProximityError(ValueError):
    pass


@dataclass(frozen=True)
class Metric:
    """A point-point proximity rule.

    ``angular`` is a cosine-style similarity, not a distance; it is exposed
    under the same interface because downstream schedules consume it directly.
    """

    kind: str = "euclidean"
    r: float = 2.0  # minkowski exponent

    KINDS = ("euclidean", "minkowski", "manhattan", "chebyshev", "canberra", "angular")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ProximityError(f"unknown metric kind {self.kind!r}")
        if self.kind == "minkowski" and not self.r > 0:
            raise ProximityError("minkowski exponent must be > 0")


def _check_dims(x: Vector, y: Vector) -> None:
    if len(x) != len(y):
        raise ProximityError("dimension mismatch")


def _check_positive(x: Vector, y: Vector, kind: str) -> None:
    if any(v <= 0 for v in x) or any(v <= 0 for v in y):
        raise ProximityError(f"{kind} requires strictly positive coordinates")


def pair_distance(x: Vector, y: Vector, metric: Metric = Metric()) -> float:
    """Metric value between two equal-length vectors."""
    _check_dims(x, y)
    k = metric.kind
    if k == "euclidean":
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(x, y)))
    if k == "minkowski":
        return sum(abs(a - b) ** metric.r for a, b in zip(x, y)) ** (1.0 / metric.r)
    if k == "manhattan":
        return sum(abs(a - b) for a, b in zip(x, y))
    if k == "chebyshev":
        return max(abs(a - b) for a, b in zip(x, y))
    if k == "canberra":
        _check_positive(x, y, "canberra")
        return sum(abs(a - b) / abs(a + b) for a, b in zip(x, y))
    # angular similarity
    _check_positive(x, y, "angular")
    dot = sum(a * b for a, b in zip(x, y))
    nx = math.sqrt(sum(a * a for a in x))
    ny = math.sqrt(sum(b * b for b in y))
    return dot / (nx * ny)


def vector_difference(x: Vector, y: Vector) -> tuple[float, ...]:
    """Componentwise absolute differences."""
    _check_dims(x, y)
    return tuple(abs(a - b) for a, b in zip(x, y))


@dataclass(frozen=True)
class OrdinalMappingRule:
    """Contiguous half-open intervals mapped to increasing ordinal levels.

    Interval boundaries are lower-exclusive / upper-inclusive, except the
    first interval which includes its lower bound.
    """

    bounds: tuple[float, ...]  # len(levels) + 1 ascending edges
    levels: tuple[int, ...]

    def __post_init__(self):
        if len(self.bounds) != len(self.levels) + 1:
            raise ProximityError("need one more bound than levels")
        if any(b2 <= b1 for b1, b2 in zip(self.bounds, self.bounds[1:])):
            raise ProximityError("interval bounds must be strictly increasing")
        if any(l2 <= l1 for l1, l2 in zip(self.levels, self.levels[1:])):
            raise ProximityError("levels must be strictly increasing")

    @classmethod
    def from_breakpoints(cls, bounds: Sequence[float],
                         levels: Optional[Sequence[int]] = None) -> "OrdinalMappingRule":
        lv = tuple(levels) if levels is not None else tuple(range(len(bounds) - 1))
        return cls(tuple(float(b) for b in bounds), lv)

    @classmethod
    def equal_width(cls, lo: float, hi: float, buckets: int,
                    first_level: int = 0) -> "OrdinalMappingRule":
        if buckets < 1 or hi <= lo:
            raise ProximityError("need a positive range and at least one bucket")
        step = (hi - lo) / buckets
        bounds = tuple(lo + k * step for k in range(buckets)) + (hi,)
        return cls(bounds, tuple(range(first_level, first_level + buckets)))

    def level(self, value: float) -> int:
        if value < self.bounds[0] or value > self.bounds[-1]:
            raise ProximityError(f"value {value} outside rule range "
                                 f"[{self.bounds[0]}, {self.bounds[-1]}]")
        if value <= self.bounds[1]:
            return self.levels[0]
        for k in range(1, len(self.levels)):
            if self.bounds[k] < value <= self.bounds[k + 1]:
                return self.levels[k]
        return self.levels[-1]


def quantize_vector(d: Vector, rule: OrdinalMappingRule) -> tuple[int, ...]:
    """Map each component of a difference vector to its ordinal level."""
    return tuple(rule.level(v) for v in d)


def ordinal_vector_to_scalar(v: Sequence[int]) -> int:
    """Collapse an ordinal vector to one level by the sum-bucket rule.

    With m components, the bucket edges sit at m, 2m, 3m and 4m: the result
    is 0 for sums up to m, then one level per further m, capping at 4.
    """
    m = len(v)
    if m == 0:
        raise ProximityError("empty ordinal vector")
    s = sum(v)
    for alpha in range(4):
        if s <= (alpha + 1) * m:
            return alpha
    return 4


def ordinal_vector_to_multiset(v: Sequence[int],
                               levels: Sequence[int]) -> MultisetEstimate:
    """Count vector components per scale level; cardinality = len(v)."""
    levels = list(levels)
    pos = {lv: k for k, lv in enumerate(levels)}
    counts = [0] * len(levels)
    for b in v:
        if b not in pos:
            raise ProximityError(f"level {b} outside scale {levels}")
        counts[pos[b]] += 1
    return MultisetEstimate(tuple(counts))


def _cluster_vectors(data: Dataset, members: Iterable[Item]) -> list[tuple[float, ...]]:
    vecs = [data.vector(it) for it in members]
    if not vecs:
        raise ProximityError("empty cluster")
    return vecs


def point_to_cluster(x: Vector, cluster: Sequence[Vector], mode: str = "min",
                     metric: Metric = Metric()) -> float:
    """Proximity between a point and a cluster of points.

    ``centroid`` measures to the componentwise mean; ``centroid-median``
    to the componentwise median.
    """
    if not cluster:
        raise ProximityError("empty cluster")
    if mode in ("min", "max", "avg"):
        ds = [pair_distance(x, y, metric) for y in cluster]
        if mode == "min":
            return min(ds)
        if mode == "max":
            return max(ds)
        return sum(ds) / len(ds)
    if mode == "centroid":
        centre = tuple(sum(col) / len(cluster) for col in zip(*cluster))
        return pair_distance(x, centre, metric)
    if mode == "centroid-median":
        centre = tuple(_stat_median(col) for col in zip(*cluster))
        return pair_distance(x, centre, metric)
    raise ProximityError(f"unknown point-cluster mode {mode!r}")


def intra_cluster_proximity(cluster: Sequence[Vector], mode: str = "avg",
                            metric: Metric = Metric()) -> float:
    """Aggregate distance over all unordered member pairs of one cluster."""
    if len(cluster) < 2:
        raise ProximityError("intra-cluster proximity needs at least two members")
    ds = [pair_distance(cluster[i], cluster[j], metric)
          for i in range(len(cluster)) for j in range(i + 1, len(cluster))]
    if mode == "min":
        return min(ds)
    if mode == "max":
        return max(ds)
    if mode == "avg":
        return sum(ds) / len(ds)
    raise ProximityError(f"unknown intra mode {mode!r}")


def inter_cluster_proximity(xs: Sequence[Vector], ys: Sequence[Vector],
                            mode: str = "min", metric: Metric = Metric()) -> float:
    """Aggregate distance over all cross pairs of two disjoint clusters."""
    if not xs or not ys:
        raise ProximityError("empty cluster")
    if any(tuple(a) == tuple(b) for a in xs for b in ys):
        raise ProximityError("clusters share a point")
    ds = [pair_distance(a, b, metric) for a in xs for b in ys]
    if mode == "min":
        return min(ds)
    if mode == "max":
        return max(ds)
    if mode == "avg":
        return sum(ds) / len(ds)
    raise ProximityError(f"unknown inter mode {mode!r}")


def proximity_matrix(data: Dataset, metric: Metric = Metric()) -> ProximityMatrix:
    """Full symmetric pairwise matrix over the dataset items (O(m n^2))."""
    n = data.n
    grid: list[list[Optional[float]]] = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            try:
                z = pair_distance(data.estimates[i], data.estimates[j], metric)
            except ProximityError as exc:
                raise ProximityError(
                    f"pair ({data.items[i]!r}, {data.items[j]!r}): {exc}") from exc
            grid[i][j] = grid[j][i] = z
    return ProximityMatrix(data.items, tuple(tuple(r) for r in grid))


def threshold_graph(z: ProximityMatrix, t: float) -> WeightedGraph:
    """Keep edge (i, j) iff the proximity is present and at most ``t``."""
    if t < 0:
        raise ProximityError("threshold must be nonnegative")
    edges = [(u, v, w) for u, v, w in z.present_pairs() if w <= t]
    return WeightedGraph.build(z.items, edges)
