"""Combinatorial clustering toolkit.

Proximity calculus over quantitative/ordinal/multiset scales, quality
measures for clustering solutions, solution comparison and consensus,
agglomerative and graph-based clustering algorithms, assignment-based
clustering, and one-stage restructuring with knapsack engines.
"""

from .core import (Dataset, Hierarchy, Partition, ProximityMatrix, Ranking,
                   SignedWeightedGraph, WeightedGraph, validate_partition)
from .multiset import MultisetEstimate, StepProximity
from .proximity import Metric, OrdinalMappingRule

__version__ = "0.1.0"

__all__ = [
    "Dataset", "Hierarchy", "Partition", "ProximityMatrix", "Ranking",
    "SignedWeightedGraph", "WeightedGraph", "validate_partition",
    "MultisetEstimate", "StepProximity", "Metric", "OrdinalMappingRule",
    "__version__",
]
