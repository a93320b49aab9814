"""Shared domain types: datasets, proximity matrices, partitions, graphs.

All containers are frozen after construction and hashable where practical,
so they can be shared freely between solver passes and test oracles.
Item identifiers are opaque (strings or ints); matrices index items by
their dense position 0..n-1 in the declared item order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Sequence, Union

Item = Hashable
Value = Union[int, float]


class ModelError(ValueError):
    """Raised when a domain object would violate its invariants."""


def item_key(x: Item) -> tuple:
    """Total order over mixed identifier types: numbers first, then strings."""
    if isinstance(x, bool):
        return (0, float(x), "")
    if isinstance(x, (int, float)):
        return (0, float(x), "")
    return (1, 0.0, str(x))


def _dedupe_check(ids: Sequence[Item], what: str) -> None:
    if len(set(ids)) != len(ids):
        raise ModelError(f"duplicate {what} identifiers")


@dataclass(frozen=True)
class Dataset:
    """Items with one numeric (or ordinal-coded) estimate per parameter."""

    items: tuple[Item, ...]
    parameters: tuple[str, ...]
    estimates: tuple[tuple[Value, ...], ...]  # row per item, column per parameter

    def __post_init__(self):
        _dedupe_check(self.items, "item")
        if len(self.parameters) < 1:
            raise ModelError("dataset needs at least one parameter")
        if len(self.estimates) != len(self.items):
            raise ModelError("one estimate row per item required")
        m = len(self.parameters)
        for row in self.estimates:
            if len(row) != m:
                raise ModelError("ragged estimate row")

    @classmethod
    def build(cls, rows: Mapping[Item, Sequence[Value]],
              parameters: Optional[Sequence[str]] = None) -> "Dataset":
        items = tuple(rows)
        width = len(next(iter(rows.values()))) if rows else 0
        params = tuple(parameters) if parameters is not None else tuple(
            f"p{j + 1}" for j in range(width))
        return cls(items, params,
                   tuple(tuple(rows[it]) for it in items))

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def m(self) -> int:
        return len(self.parameters)

    def vector(self, item: Item) -> tuple[Value, ...]:
        return self.estimates[self.items.index(item)]


@dataclass(frozen=True)
class ProximityMatrix:
    """Symmetric pairwise proximity; ``None`` marks an absent ("very large") entry.

    Absent entries are kept as an explicit flag rather than a sentinel number
    so that nothing can accidentally do arithmetic on them.
    """

    items: tuple[Item, ...]
    entries: tuple[tuple[Optional[float], ...], ...]

    def __post_init__(self):
        _dedupe_check(self.items, "item")
        n = len(self.items)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ModelError("proximity matrix must be square over the items")
        for i in range(n):
            if self.entries[i][i] != 0.0:
                raise ModelError("proximity diagonal must be zero")
            for j in range(i + 1, n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ModelError("proximity matrix must be symmetric")

    @classmethod
    def from_pairs(cls, items: Sequence[Item],
                   pairs: Mapping[tuple[Item, Item], float]) -> "ProximityMatrix":
        """Build from a sparse {(u, v): z} map; unlisted pairs are absent."""
        items = tuple(items)
        index = {it: k for k, it in enumerate(items)}
        n = len(items)
        grid: list[list[Optional[float]]] = [[None] * n for _ in range(n)]
        for k in range(n):
            grid[k][k] = 0.0
        for (u, v), z in pairs.items():
            i, j = index[u], index[v]
            if i == j:
                raise ModelError("self-proximity must stay on the diagonal")
            grid[i][j] = grid[j][i] = float(z)
        return cls(items, tuple(tuple(r) for r in grid))

    @property
    def n(self) -> int:
        return len(self.items)

    def index(self, item: Item) -> int:
        return self.items.index(item)

    def get(self, u: Item, v: Item) -> Optional[float]:
        return self.entries[self.index(u)][self.index(v)]

    def present_pairs(self) -> list[tuple[Item, Item, float]]:
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                z = self.entries[i][j]
                if z is not None:
                    out.append((self.items[i], self.items[j], z))
        return out


def _canonical_clusters(clusters: Iterable[Iterable[Item]]) -> tuple[tuple[Item, ...], ...]:
    inner = [tuple(sorted(c, key=item_key)) for c in clusters]
    return tuple(sorted(inner, key=lambda c: tuple(item_key(x) for x in c)))


@dataclass(frozen=True)
class Partition:
    """Disjoint non-empty clusters covering a universe.

    Equality is insensitive to cluster order and member order: clusters are
    canonicalised (sorted members, sorted cluster list) at construction.
    """

    clusters: tuple[tuple[Item, ...], ...]
    universe: frozenset[Item] = field(default=frozenset())

    def __post_init__(self):
        canon = _canonical_clusters(self.clusters)
        object.__setattr__(self, "clusters", canon)
        if not self.universe:
            object.__setattr__(
                self, "universe", frozenset(x for c in canon for x in c))

    @classmethod
    def of(cls, *clusters: Iterable[Item],
           universe: Optional[Iterable[Item]] = None) -> "Partition":
        return cls(tuple(tuple(c) for c in clusters),
                   frozenset(universe) if universe is not None else frozenset())

    @property
    def size(self) -> int:
        return len(self.clusters)

    def cluster_of(self, item: Item) -> tuple[Item, ...]:
        for c in self.clusters:
            if item in c:
                return c
        raise KeyError(item)

    def as_sets(self) -> list[frozenset[Item]]:
        return [frozenset(c) for c in self.clusters]


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_partition(p: Partition) -> ValidationResult:
    """Diagnostic check: disjoint, covering, no empty cluster. Never raises."""
    seen: set[Item] = set()
    for c in p.clusters:
        if not c:
            return ValidationResult(False, "empty cluster")
        for x in c:
            if x in seen:
                return ValidationResult(False, f"overlap at item {x!r}")
            seen.add(x)
    missing = p.universe - seen
    if missing:
        some = sorted(missing, key=item_key)[0]
        return ValidationResult(False, f"missing item {some!r}")
    extra = seen - p.universe
    if extra:
        some = sorted(extra, key=item_key)[0]
        return ValidationResult(False, f"item {some!r} outside universe")
    return ValidationResult(True)


@dataclass(frozen=True)
class Ranking:
    """Linearly ordered layers of items; layer 1 is best."""

    layers: tuple[tuple[Item, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "layers",
                           tuple(tuple(sorted(l, key=item_key)) for l in self.layers))
        flat = [x for l in self.layers for x in l]
        _dedupe_check(flat, "ranked item")
        if any(not l for l in self.layers):
            raise ModelError("empty ranking layer")

    @property
    def universe(self) -> frozenset[Item]:
        return frozenset(x for l in self.layers for x in l)

    def layer_of(self, item: Item) -> int:
        """1-based layer index of an item."""
        for k, layer in enumerate(self.layers, start=1):
            if item in layer:
                return k
        raise KeyError(item)


@dataclass(frozen=True)
class Hierarchy:
    """Rooted tree (or DAG when ``allow_dag``) of parent->child arcs over nodes."""

    nodes: tuple[Item, ...]
    arcs: frozenset[tuple[Item, Item]]  # (parent, child)
    allow_dag: bool = False

    def __post_init__(self):
        _dedupe_check(self.nodes, "hierarchy node")
        known = set(self.nodes)
        for p, c in self.arcs:
            if p not in known or c not in known:
                raise ModelError("arc endpoint is not a declared node")
            if p == c:
                raise ModelError("self-arc in hierarchy")
        if not self.allow_dag:
            parents: dict[Item, Item] = {}
            for p, c in self.arcs:
                if c in parents:
                    raise ModelError(f"node {c!r} has two parents")
                parents[c] = p
        if self._has_cycle():
            raise ModelError("hierarchy contains a cycle")

    def _has_cycle(self) -> bool:
        children: dict[Item, list[Item]] = {}
        for p, c in self.arcs:
            children.setdefault(p, []).append(c)
        color: dict[Item, int] = {}

        def visit(u: Item) -> bool:
            color[u] = 1
            for v in children.get(u, ()):
                if color.get(v) == 1:
                    return True
                if color.get(v) != 2 and visit(v):
                    return True
            color[u] = 2
            return False

        return any(color.get(u) is None and visit(u) for u in self.nodes)

    def roots(self) -> list[Item]:
        have_parent = {c for _, c in self.arcs}
        return [u for u in self.nodes if u not in have_parent]


def _norm_edge(u: Item, v: Item) -> tuple[Item, Item]:
    if u == v:
        raise ModelError("self-loop")
    a, b = sorted((u, v), key=item_key)
    return (a, b)


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph with one finite real weight per edge."""

    vertices: tuple[Item, ...]
    edges: tuple[tuple[Item, Item, float], ...]

    def __post_init__(self):
        _dedupe_check(self.vertices, "vertex")
        known = set(self.vertices)
        seen: set[tuple[Item, Item]] = set()
        normed = []
        for u, v, w in self.edges:
            if u not in known or v not in known:
                raise ModelError("edge endpoint is not a declared vertex")
            e = _norm_edge(u, v)
            if e in seen:
                raise ModelError(f"duplicate edge {e}")
            if not math.isfinite(w):
                raise ModelError("edge weight must be finite")
            seen.add(e)
            normed.append((e[0], e[1], float(w)))
        object.__setattr__(self, "edges", tuple(sorted(
            normed, key=lambda e: (item_key(e[0]), item_key(e[1])))))

    @classmethod
    def build(cls, vertices: Iterable[Item],
              edges: Iterable[tuple[Item, Item, float]]) -> "WeightedGraph":
        return cls(tuple(vertices), tuple(edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def p(self) -> int:
        return len(self.edges)

    def weight(self, u: Item, v: Item) -> Optional[float]:
        e = _norm_edge(u, v)
        for a, b, w in self.edges:
            if (a, b) == e:
                return w
        return None

    def adjacency(self) -> dict[Item, dict[Item, float]]:
        adj: dict[Item, dict[Item, float]] = {u: {} for u in self.vertices}
        for u, v, w in self.edges:
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def edge_set(self) -> frozenset[tuple[Item, Item]]:
        return frozenset((u, v) for u, v, _ in self.edges)


@dataclass(frozen=True)
class SignedWeightedGraph:
    """Undirected graph whose weights are strictly positive (similar) or
    strictly negative (dissimilar); zero weights are rejected."""

    vertices: tuple[Item, ...]
    edges: tuple[tuple[Item, Item, float], ...]

    def __post_init__(self):
        _dedupe_check(self.vertices, "vertex")
        known = set(self.vertices)
        seen: set[tuple[Item, Item]] = set()
        normed = []
        for u, v, w in self.edges:
            if u not in known or v not in known:
                raise ModelError("edge endpoint is not a declared vertex")
            e = _norm_edge(u, v)
            if e in seen:
                raise ModelError(f"duplicate edge {e}")
            if w == 0 or not math.isfinite(w):
                raise ModelError("signed edge weight must be nonzero and finite")
            seen.add(e)
            normed.append((e[0], e[1], float(w)))
        object.__setattr__(self, "edges", tuple(sorted(
            normed, key=lambda e: (item_key(e[0]), item_key(e[1])))))

    @classmethod
    def build(cls, vertices: Iterable[Item],
              edges: Iterable[tuple[Item, Item, float]]) -> "SignedWeightedGraph":
        return cls(tuple(vertices), tuple(edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def weight(self, u: Item, v: Item) -> Optional[float]:
        e = _norm_edge(u, v)
        for a, b, w in self.edges:
            if (a, b) == e:
                return w
        return None

    def adjacency(self) -> dict[Item, dict[Item, float]]:
        adj: dict[Item, dict[Item, float]] = {u: {} for u in self.vertices}
        for u, v, w in self.edges:
            adj[u][v] = w
            adj[v][u] = w
        return adj
