"""Declarative pipeline composition and report emission.

A pipeline config names the problem kind, the metric, the method with its
parameters, an optional aggregation stage and the quality measures to
attach. Reports serialise to a stable, versioned JSON schema; the text
format is a human-readable summary of the same content.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence

from . import agglomerative, assign, compare, graphclust, quality, restructure
from .core import (Dataset, Partition, SignedWeightedGraph, WeightedGraph,
                   validate_partition)
from .io import partition_to_json
from .proximity import Metric, proximity_matrix

SCHEMA_VERSION = 1


class PipelineError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    problem: str                      # cluster | consensus | compare | restructure | assign | schedule | quality
    metric: Metric = Metric()
    method: str = ""
    params: Mapping[str, Any] = field(default_factory=dict)
    aggregation: Optional[str] = None          # None | "consensus"
    validation: tuple[str, ...] = ()           # quality measures to attach

    KNOWN_PROBLEMS = ("cluster", "consensus", "compare", "restructure",
                      "assign", "schedule", "quality")

    def __post_init__(self):
        if self.problem not in self.KNOWN_PROBLEMS:
            raise PipelineError(f"unknown problem kind {self.problem!r}")

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "PipelineConfig":
        metric_raw = raw.get("metric", {})
        if isinstance(metric_raw, str):
            metric = Metric(metric_raw)
        else:
            metric = Metric(metric_raw.get("kind", "euclidean"),
                            metric_raw.get("r", 2.0))
        return cls(problem=raw.get("problem", ""),
                   metric=metric,
                   method=raw.get("method", ""),
                   params=dict(raw.get("params", {})),
                   aggregation=raw.get("aggregation"),
                   validation=tuple(raw.get("validation", ())))


@dataclass
class Report:
    kind: str
    payload: dict
    quality: dict = field(default_factory=dict)
    traces: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION
    timestamp: str = ""

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "payload": self.payload,
            "quality": self.quality,
            "traces": self.traces,
            "warnings": self.warnings,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "Report":
        return cls(kind=raw["kind"], payload=dict(raw["payload"]),
                   quality=dict(raw.get("quality", {})),
                   traces=list(raw.get("traces", [])),
                   warnings=list(raw.get("warnings", [])),
                   schema_version=raw.get("schema_version", SCHEMA_VERSION),
                   timestamp=raw.get("timestamp", ""))

    def same_content(self, other: "Report") -> bool:
        """Equality modulo the timestamp field."""
        a, b = self.to_dict(), other.to_dict()
        a.pop("timestamp"), b.pop("timestamp")
        return a == b


def emit_report(r: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(r.to_dict(), indent=2, sort_keys=True)
    if fmt == "text":
        lines = [f"[{r.kind}] schema v{r.schema_version}"]
        for key, val in sorted(r.payload.items()):
            lines.append(f"  {key}: {val}")
        if r.quality:
            lines.append("  quality:")
            for key, val in sorted(r.quality.items()):
                lines.append(f"    {key}: {val}")
        for w in r.warnings:
            lines.append(f"  warning: {w}")
        return "\n".join(lines)
    raise PipelineError(f"unknown report format {fmt!r}")


def parse_report(text: str) -> Report:
    return Report.from_dict(json.loads(text))


def _stamp(report: Report) -> Report:
    report.timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return report


_CLUSTER_METHODS = ("agglomerative_basic", "agglomerative_balanced",
                    "mst", "adaptive_mst", "clique", "correlation_greedy",
                    "modularity_greedy", "girvan_newman")


def _trace_events(events) -> list:
    return [{"first": list(ev.first), "second": list(ev.second),
             "linkage": ev.linkage_value, "merged": list(ev.merged)}
            for ev in events]


def _attach_quality(report: Report, cfg: PipelineConfig, partition: Partition,
                    data: Optional[Dataset], graph: Optional[WeightedGraph],
                    z=None) -> None:
    for measure in cfg.validation:
        if measure == "modularity":
            if graph is None:
                raise PipelineError("modularity needs a graph input")
            res = quality.modularity(graph, partition)
            report.quality["modularity"] = {
                "total": res.total,
                "per_cluster": [
                    {"internal_edges": c.internal_edges,
                     "external_edges": c.external_edges,
                     "edge_fraction": c.edge_fraction,
                     "endpoint_fraction": c.endpoint_fraction}
                    for c in res.per_cluster]}
        elif measure == "intra":
            if z is None:
                raise PipelineError("intra quality needs a proximity matrix")
            report.quality["intra"] = quality.intra_quality(partition, z)
        elif measure == "inter":
            if z is None:
                raise PipelineError("inter quality needs a proximity matrix")
            if partition.size >= 2:
                report.quality["inter"] = quality.inter_quality(partition, z)
        elif measure == "balance":
            lo = int(cfg.params.get("balance_lo", 1))
            hi = int(cfg.params.get("balance_hi", max(len(c) for c in partition.clusters)))
            bv = quality.balance_vector(partition, lo, hi)
            report.quality["balance"] = {
                "bounds": [lo, hi],
                "deviation_counts": [list(t) for t in bv.deviation_counts]}
        else:
            raise PipelineError(f"unknown quality measure {measure!r}")


def run_pipeline(cfg: PipelineConfig,
                 data: Optional[Dataset] = None,
                 graph: Optional[WeightedGraph] = None,
                 signed_graph: Optional[SignedWeightedGraph] = None,
                 partitions: Sequence[Partition] = (),
                 angles: Optional[Mapping[Any, float]] = None) -> Report:
    """Execute metric -> matrix -> method -> aggregation -> validation."""
    try:
        if cfg.problem == "cluster":
            return _stamp(_run_cluster(cfg, data, graph, signed_graph))
        if cfg.problem == "consensus":
            return _stamp(_run_consensus(cfg, partitions))
        if cfg.problem == "compare":
            return _stamp(_run_compare(cfg, partitions))
        if cfg.problem == "restructure":
            return _stamp(_run_restructure(cfg, partitions))
        if cfg.problem == "schedule":
            return _stamp(_run_schedule(cfg, angles, data))
        if cfg.problem == "assign":
            return _stamp(_run_assign(cfg, data))
        if cfg.problem == "quality":
            return _stamp(_run_quality(cfg, data, graph, partitions))
    except (PipelineError, ValueError) as exc:
        stage = cfg.method or cfg.problem
        raise PipelineError(f"stage {stage!r}: {exc}") from exc
    raise PipelineError(f"unhandled problem kind {cfg.problem!r}")


def _partition_report(cfg: PipelineConfig, partition: Partition, kind: str,
                      data=None, graph=None, z=None,
                      traces: Optional[list] = None) -> Report:
    check = validate_partition(partition)
    report = Report(kind=kind, payload={
        "clusters": partition_to_json(partition),
        "cluster_count": partition.size})
    if traces:
        report.traces = traces
    if not check:
        report.warnings.append(check.reason)
    if partition.size == 0:
        report.warnings.append("empty partition")
    _attach_quality(report, cfg, partition, data, graph, z)
    return report


def _run_cluster(cfg: PipelineConfig, data, graph, signed_graph) -> Report:
    method = cfg.method
    params = dict(cfg.params)
    if method not in _CLUSTER_METHODS:
        raise PipelineError(f"unknown cluster method {method!r}")
    z = None
    traces: list = []
    if method in ("agglomerative_basic", "agglomerative_balanced", "mst",
                  "adaptive_mst"):
        if data is None and graph is None:
            raise PipelineError(f"{method} needs a dataset or graph input")
        if data is not None:
            z = proximity_matrix(data, cfg.metric)
        else:
            z = graphclust._matrix_from_tree(graph)
    if method == "agglomerative_basic":
        trace = agglomerative.agglomerative_basic(
            z, params.get("linkage", "single"), data=data, metric=cfg.metric)
        partition = trace.final
        traces = [{"merges": _trace_events(trace.events)}]
    elif method == "agglomerative_balanced":
        res = agglomerative.agglomerative_balanced(
            z, int(params["max_cluster_size"]),
            linkage=params.get("linkage", "single"),
            min_size=int(params.get("min_cluster_size", 1)),
            data=data, metric=cfg.metric)
        partition = res.partition
        traces = [{"merges": _trace_events(res.trace.events)}]
    elif method == "mst":
        res = graphclust.mst_clustering(z, int(params["max_cluster_size"]),
                                        linkage=params.get("linkage", "single"))
        partition = res.partition
        traces = [{"merges": _trace_events(res.trace.events)}]
    elif method == "adaptive_mst":
        res = graphclust.adaptive_mst_clustering(
            data, int(params.get("buckets", 5)),
            int(params.get("min_cluster_size", 1)),
            int(params["max_cluster_size"]), metric=cfg.metric)
        partition = res.partition
        traces = [{"delta_used": res.delta_used}]
    elif method == "clique":
        if graph is None:
            raise PipelineError("clique clustering needs a graph input")
        partition = graphclust.clique_clustering(graph)
    elif method == "correlation_greedy":
        if signed_graph is None:
            raise PipelineError("correlation clustering needs a signed graph")
        res = graphclust.correlation_greedy(
            signed_graph, float(params.get("disagreement_budget", 1e18)))
        partition = res.partition
        traces = [{"iterations": [
            {"iteration": pt.iteration, "objective": list(pt.objective),
             "merged": [list(pt.merged_pair[0]), list(pt.merged_pair[1])],
             "improvement": list(pt.improvement)}
            for pt in res.trace]}]
    elif method == "modularity_greedy":
        if graph is None:
            raise PipelineError("modularity clustering needs a graph input")
        res = graphclust.modularity_greedy(graph)
        partition = res.partition
        traces = [{"merges": [
            {"first": list(a), "second": list(b), "modularity": q}
            for a, b, q in res.merges]}]
    else:  # girvan_newman
        if graph is None:
            raise PipelineError("girvan-newman needs a graph input")
        res = graphclust.girvan_newman(graph, int(params["target_components"]))
        partition = res.partition
        traces = [{"removed_edges": [list(e) for e in res.removed]}]
    return _partition_report(cfg, partition, "cluster",
                             data=data, graph=graph, z=z, traces=traces)


def _run_consensus(cfg: PipelineConfig, partitions) -> Report:
    if not partitions:
        raise PipelineError("consensus needs input partitions")
    res = compare.consensus_partition(
        list(partitions),
        int(cfg.params.get("min_clusters", 1)),
        int(cfg.params.get("max_clusters", len(partitions[0].universe))),
        mode=cfg.params.get("mode", "exhaustive"))
    report = Report(kind="consensus", payload={
        "clusters": partition_to_json(res.partition),
        "per_input_costs": list(res.per_input_costs),
        "total_cost": res.total_cost,
        "candidates_examined": res.candidates_examined})
    return report


def _run_compare(cfg: PipelineConfig, partitions) -> Report:
    if len(partitions) != 2:
        raise PipelineError("compare needs exactly two partitions")
    trace = compare.partition_edit_cost(partitions[0], partitions[1])
    return Report(kind="compare", payload={
        "cost": trace.cost,
        "moves": [[repr(i), f, t] for i, f, t in trace.moves],
        "matching": [list(m) for m in trace.matching]})


def _run_restructure(cfg: PipelineConfig, partitions) -> Report:
    if len(partitions) != 2:
        raise PipelineError("restructure needs the initial and goal partitions")
    plan = restructure.restructure_one_stage(
        partitions[0], partitions[1], float(cfg.params.get("budget", 0.0)),
        op_costs=cfg.params.get("op_costs"),
        op_profits=cfg.params.get("op_profits"))
    return Report(kind="restructure", payload={
        "clusters": partition_to_json(plan.result),
        "selected_items": [repr(op.item) for op in plan.selected],
        "total_cost": plan.total_cost,
        "residual_distance": plan.residual_distance})


def _run_schedule(cfg: PipelineConfig, angles, data) -> Report:
    if angles is None:
        if data is None or "angle" not in data.parameters:
            raise PipelineError("schedule needs node angles")
        col = data.parameters.index("angle")
        angles = {it: data.estimates[k][col] for k, it in enumerate(data.items)}
    slots = assign.multibeam_schedule(angles, int(cfg.params.get("beams", 1)))
    return Report(kind="schedule", payload={
        "slots": [list(s) for s in slots],
        "slot_count": len(slots)})


def _run_assign(cfg: PipelineConfig, data) -> Report:
    raw = cfg.params.get("instance")
    if raw is None:
        raise PipelineError("assign needs an 'instance' parameter block")
    inst = assign.AccessPointInstance(
        tuple(tuple(c) for c in raw["user_coords"]),
        tuple(raw["user_bandwidth"]), tuple(raw["user_reliability"]),
        tuple(tuple(c) for c in raw["ap_coords"]),
        tuple(raw["ap_bandwidth"]), tuple(raw["ap_user_cap"]),
        tuple(raw["ap_reliability"]), tuple(raw["ap_max_distance"]))
    res = assign.access_point_assignment(inst)
    return Report(kind="assign", payload={
        "assignment": [j if j is not None else None for j in res.assignment],
        "total_profit": res.total_profit,
        "unassigned": list(res.unassigned)})


def _run_quality(cfg: PipelineConfig, data, graph, partitions) -> Report:
    if len(partitions) != 1:
        raise PipelineError("quality needs exactly one partition")
    partition = partitions[0]
    z = proximity_matrix(data, cfg.metric) if data is not None else None
    report = Report(kind="quality", payload={
        "clusters": partition_to_json(partition),
        "cluster_count": partition.size})
    _attach_quality(report, cfg, partition, data, graph, z)
    return report
