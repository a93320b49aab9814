"""File ingestion: CSV datasets, edge lists, partition files."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Union

from .core import (Dataset, ModelError, Partition, SignedWeightedGraph,
                   WeightedGraph)


class LoadError(ValueError):
    pass


def _coerce(cell: str, path: str, line: int):
    text = cell.strip()
    try:
        v = float(text)
    except ValueError as exc:
        raise LoadError(f"{path}:{line}: not a number: {text!r}") from exc
    return int(v) if v.is_integer() else v


def load_dataset(path: Union[str, Path]) -> Dataset:
    """CSV with a header row of parameter names; first column is the item id."""
    path = str(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise LoadError(f"{path}: empty file")
        if len(header) < 2:
            raise LoadError(f"{path}: need an id column and at least one parameter")
        params = tuple(h.strip() for h in header[1:])
        items = []
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise LoadError(f"{path}:{lineno}: expected {len(header)} fields, "
                                f"got {len(row)}")
            ident = row[0].strip()
            if ident in items:
                raise LoadError(f"{path}:{lineno}: duplicate id {ident!r}")
            items.append(ident)
            rows.append(tuple(_coerce(c, path, lineno) for c in row[1:]))
    try:
        return Dataset(tuple(items), params, tuple(rows))
    except ModelError as exc:
        raise LoadError(f"{path}: {exc}") from exc


def _load_edges(path: str, signed: bool):
    vertices: list[str] = []
    edges = []
    seen = set()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise LoadError(f"{path}:{lineno}: expected 'u v w'")
            u, v, wtext = parts
            if u == v:
                raise LoadError(f"{path}:{lineno}: self-loop on {u!r}")
            try:
                w = float(wtext)
            except ValueError as exc:
                raise LoadError(f"{path}:{lineno}: bad weight {wtext!r}") from exc
            if signed and w == 0:
                raise LoadError(f"{path}:{lineno}: zero weight in signed graph")
            key = frozenset((u, v))
            if key in seen:
                raise LoadError(f"{path}:{lineno}: duplicate edge {u}-{v}")
            seen.add(key)
            for x in (u, v):
                if x not in vertices:
                    vertices.append(x)
            edges.append((u, v, w))
    return vertices, edges


def load_graph(path: Union[str, Path],
               signed: bool = False) -> Union[WeightedGraph, SignedWeightedGraph]:
    """Whitespace edge list 'u v w', one edge per line, '#' comments."""
    path = str(path)
    vertices, edges = _load_edges(path, signed)
    cls = SignedWeightedGraph if signed else WeightedGraph
    try:
        return cls.build(vertices, edges)
    except ModelError as exc:
        raise LoadError(f"{path}: {exc}") from exc


def load_partition(path: Union[str, Path]) -> Partition:
    """JSON object {cluster-name: [item ids]}."""
    path = str(path)
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise LoadError(f"{path}: expected a JSON object of clusters")
    clusters = []
    for name, members in data.items():
        if not isinstance(members, list) or not members:
            raise LoadError(f"{path}: cluster {name!r} must be a non-empty list")
        clusters.append(tuple(members))
    try:
        p = Partition.of(*clusters)
    except ModelError as exc:
        raise LoadError(f"{path}: {exc}") from exc
    from .core import validate_partition
    check = validate_partition(p)
    if not check:
        raise LoadError(f"{path}: {check.reason}")
    return p


def partition_to_json(p: Partition) -> dict:
    """Canonical serialisation: clusters named c1.. in canonical order."""
    return {f"c{k + 1}": list(c) for k, c in enumerate(p.clusters)}
