"""Command line interface.

Verbs: cluster, consensus, compare, restructure, assign, schedule, quality.
Exit codes: 0 success, 2 validation/input error, 3 solver infeasibility.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .assign import AssignmentError
from .core import ModelError
from .io import LoadError, load_dataset, load_graph, load_partition
from .pipeline import PipelineConfig, PipelineError, emit_report, run_pipeline
from .restructure import RestructureError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3

_INFEASIBLE_MARKERS = ("no feasible", "infeasible", "disconnected",
                       "guard exceeded", "no admissible")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combiclust",
        description="Combinatorial clustering toolkit")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in ("cluster", "consensus", "compare", "restructure",
                 "assign", "schedule", "quality"):
        p = sub.add_parser(verb)
        p.add_argument("--config", help="JSON pipeline config")
        p.add_argument("--input", action="append", default=[],
                       help="dataset CSV or partition JSON (repeatable)")
        p.add_argument("--graph", help="edge list file 'u v w'")
        p.add_argument("--signed-graph", dest="signed_graph",
                       help="signed edge list file")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def _load_config(args) -> PipelineConfig:
    raw = {}
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
    raw.setdefault("problem", args.verb)
    if raw["problem"] != args.verb:
        raise LoadError(f"config problem {raw['problem']!r} does not match "
                        f"verb {args.verb!r}")
    return PipelineConfig.from_dict(raw)


def _classify_inputs(paths):
    datasets, partitions = [], []
    for path in paths:
        if path.endswith(".json"):
            partitions.append(load_partition(path))
        else:
            datasets.append(load_dataset(path))
    if len(datasets) > 1:
        raise LoadError("at most one dataset input is supported")
    return (datasets[0] if datasets else None), partitions


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        data, partitions = _classify_inputs(args.input)
        graph = load_graph(args.graph) if args.graph else None
        signed = load_graph(args.signed_graph, signed=True) \
            if args.signed_graph else None
        report = run_pipeline(cfg, data=data, graph=graph, signed_graph=signed,
                              partitions=partitions)
    except (LoadError, ModelError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (PipelineError, AssignmentError, RestructureError, ValueError) as exc:
        text = str(exc).lower()
        if any(marker in text for marker in _INFEASIBLE_MARKERS):
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    rendered = emit_report(report, args.format)
    if args.output:
        Path(args.output).write_text(rendered + "\n")
    else:
        print(rendered)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
