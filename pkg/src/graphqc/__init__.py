"""Quantum clustering for graphs."""

__version__ = "0.1.0"

from .ggd import ClusterAssignment, SuccessorMap, build_successors, cluster, resolve_centers
from .graph import Graph, LabelSet, load_edge_list, load_labels, neighbors, pairwise_distance
from .metrics import MetricReport, ari, contingency, evaluate, fmi, matched_scores, modularity, nmi
from .potential import PotentialField, compute_potentials, compute_potentials_parallel, node_potential
from .sweep import MutationInterval, SweepRecord, detect_mutation, run_sweep

__all__ = [
    "ClusterAssignment",
    "Graph",
    "LabelSet",
    "MetricReport",
    "MutationInterval",
    "PotentialField",
    "SuccessorMap",
    "SweepRecord",
    "ari",
    "build_successors",
    "cluster",
    "compute_potentials",
    "compute_potentials_parallel",
    "contingency",
    "detect_mutation",
    "evaluate",
    "fmi",
    "load_edge_list",
    "load_labels",
    "matched_scores",
    "modularity",
    "neighbors",
    "nmi",
    "node_potential",
    "pairwise_distance",
    "resolve_centers",
    "run_sweep",
]
