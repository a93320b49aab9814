#!/usr/bin/env python3
"""Drive the bundled worked instances end to end through the CLI.

Writes the instance files (edge lists, partition files, configs) into a
scratch directory, runs each pipeline verb on them, and prints the report
summaries. Useful as a smoke run and as copy-paste material for the CLI.

Usage:
    python scripts/run_worked_examples.py [--outdir DIR] [--format text|json]
"""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from cases import (SEVEN_P1, SEVEN_P2, SEVEN_P3, SIGNED11_WEIGHTS,
                   TREE14_PROXIMITIES, RESTRUCT_S1, RESTRUCT_S2)
from combiclust.cli import main as cli_main
from combiclust.io import partition_to_json


def write_inputs(outdir: Path) -> dict[str, Path]:
    paths = {}

    tree = outdir / "tree14.txt"
    tree.write_text("\n".join(f"{u} {v} {w}" for (u, v), w in
                              TREE14_PROXIMITIES.items()) + "\n")
    paths["tree14"] = tree

    signed = outdir / "signed11.txt"
    signed.write_text("\n".join(f"A{u} A{v} {w}" for (u, v), w in
                                SIGNED11_WEIGHTS.items()) + "\n")
    paths["signed11"] = signed

    for name, part in (("p1", SEVEN_P1), ("p2", SEVEN_P2), ("p3", SEVEN_P3),
                       ("s1", RESTRUCT_S1), ("s2", RESTRUCT_S2)):
        p = outdir / f"{name}.json"
        p.write_text(json.dumps(partition_to_json(part), indent=2) + "\n")
        paths[name] = p

    nodes = outdir / "nodes.csv"
    nodes.write_text("id,angle\n" + "\n".join(
        f"n{k},{k * 30}" for k in range(1, 7)) + "\n")
    paths["nodes"] = nodes

    configs = {
        "balanced": {"problem": "cluster", "method": "agglomerative_balanced",
                     "params": {"max_cluster_size": 3, "linkage": "single"}},
        "mst": {"problem": "cluster", "method": "mst",
                "params": {"max_cluster_size": 4}},
        "correlation": {"problem": "cluster", "method": "correlation_greedy",
                        "params": {"disagreement_budget": 15.0}},
        "consensus": {"problem": "consensus",
                      "params": {"min_clusters": 2, "max_clusters": 3}},
        "compare": {"problem": "compare"},
        "restructure": {"problem": "restructure", "params": {"budget": 3.0}},
        "schedule": {"problem": "schedule", "params": {"beams": 2}},
    }
    for name, cfg in configs.items():
        p = outdir / f"cfg_{name}.json"
        p.write_text(json.dumps(cfg, indent=2) + "\n")
        paths[f"cfg_{name}"] = p
    return paths


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", help="where to place inputs and reports "
                                         "(default: a temp directory)")
    parser.add_argument("--format", choices=("json", "text"), default="text")
    args = parser.parse_args()
    outdir = Path(args.outdir) if args.outdir else \
        Path(tempfile.mkdtemp(prefix="combiclust-"))
    outdir.mkdir(parents=True, exist_ok=True)
    paths = write_inputs(outdir)
    print(f"inputs and reports under {outdir}\n")

    runs = [
        ("balanced clustering of the 14-element tree instance",
         ["cluster", "--config", str(paths["cfg_balanced"]),
          "--graph", str(paths["tree14"])]),
        ("correlation clustering of the 11-element signed instance",
         ["cluster", "--config", str(paths["cfg_correlation"]),
          "--signed-graph", str(paths["signed11"])]),
        ("consensus over three 7-element partitions",
         ["consensus", "--config", str(paths["cfg_consensus"]),
          "--input", str(paths["p1"]), "--input", str(paths["p2"]),
          "--input", str(paths["p3"])]),
        ("edit distance between two partitions",
         ["compare", "--config", str(paths["cfg_compare"]),
          "--input", str(paths["p1"]), "--input", str(paths["p2"])]),
        ("one-stage restructuring with budget 3",
         ["restructure", "--config", str(paths["cfg_restructure"]),
          "--input", str(paths["s1"]), "--input", str(paths["s2"])]),
        ("two-beam schedule over six nodes",
         ["schedule", "--config", str(paths["cfg_schedule"]),
          "--input", str(paths["nodes"])]),
    ]
    failures = 0
    for title, argv in runs:
        print(f"=== {title}")
        code = cli_main(argv + ["--format", args.format])
        if code != 0:
            failures += 1
            print(f"(exit code {code})")
        print()
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
