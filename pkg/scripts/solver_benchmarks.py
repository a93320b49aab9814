#!/usr/bin/env python3
"""Compare the heuristic solvers against their exact counterparts on random
instances and print optimality-gap statistics.

Usage:
    python scripts/solver_benchmarks.py [--instances N] [--seed S]
"""

from __future__ import annotations

import argparse
import random
import statistics

from combiclust.assign import AssignmentInstance, gap_exhaustive, gap_greedy
from combiclust.compare import (consensus_partition, min_relocations,
                                partition_edit_cost)
from combiclust.core import Partition


def random_partition(rng: random.Random, items) -> Partition:
    blocks: list[list] = []
    for x in items:
        if blocks and rng.random() < 0.65:
            rng.choice(blocks).append(x)
        else:
            blocks.append([x])
    return Partition.of(*blocks)


def bench_edit_cost(rng: random.Random, instances: int) -> None:
    items = list(range(7))
    gaps = []
    for _ in range(instances):
        a, b = random_partition(rng, items), random_partition(rng, items)
        greedy = partition_edit_cost(a, b).cost
        exact = min_relocations(a, b)
        gaps.append(greedy - exact)
    print(f"partition edit cost: mean gap {statistics.mean(gaps):.3f}, "
          f"max gap {max(gaps)}, exact on "
          f"{sum(1 for g in gaps if g == 0)}/{instances}")


def bench_gap(rng: random.Random, instances: int) -> None:
    ratios = []
    for _ in range(instances):
        n, mu = rng.randint(2, 7), rng.randint(1, 3)
        inst = AssignmentInstance(
            tuple(tuple(round(rng.uniform(1, 9), 2) for _ in range(mu))
                  for _ in range(n)),
            tuple(tuple(round(rng.uniform(0.5, 4), 2) for _ in range(mu))
                  for _ in range(n)),
            tuple(round(rng.uniform(2, 8), 2) for _ in range(mu)))
        greedy = gap_greedy(inst).total_profit
        exact = gap_exhaustive(inst).total_profit
        ratios.append(greedy / exact if exact else 1.0)
    print(f"assignment greedy:   mean profit ratio {statistics.mean(ratios):.3f}, "
          f"worst {min(ratios):.3f}")


def bench_consensus(rng: random.Random, instances: int) -> None:
    items = list(range(6))
    gaps = []
    for _ in range(instances):
        inputs = [random_partition(rng, items) for _ in range(3)]
        exact = consensus_partition(inputs, 1, 6).total_cost
        greedy = consensus_partition(inputs, 1, 6, mode="greedy").total_cost
        gaps.append(greedy - exact)
    print(f"consensus greedy:    mean extra cost {statistics.mean(gaps):.3f}, "
          f"max {max(gaps)}, exact on "
          f"{sum(1 for g in gaps if g == 0)}/{instances}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instances", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    bench_edit_cost(rng, args.instances)
    bench_gap(rng, args.instances)
    bench_consensus(rng, min(args.instances, 40))


if __name__ == "__main__":
    main()
