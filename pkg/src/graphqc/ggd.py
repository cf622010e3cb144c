"""Graph gradient descent: every node walks downhill in potential to a center.

Each node points at the member of its closed neighborhood (itself plus its
neighbors) with the smallest ``(potential, id)`` pair. Following these
pointers strictly decreases ``(potential, id)``, so every walk ends at a
self-pointing node, the center of its cluster.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .potential import PotentialField, compute_potentials_parallel


class DescentCycleError(RuntimeError):
    """Successor pointers formed a cycle; cannot happen with a valid map."""


@dataclass(frozen=True, eq=False)
class SuccessorMap:
    succ: np.ndarray

    def __len__(self) -> int:
        return len(self.succ)


@dataclass(frozen=True, eq=False)
class ClusterAssignment:
    """Resolved clusters.

    Attributes:
        center: Fixed point reached from each node.
        cluster_index: Dense cluster number per node, ordered by center id.
        num_clusters: Number of distinct centers.
    """

    center: np.ndarray
    cluster_index: np.ndarray
    num_clusters: int

    @property
    def centers(self) -> np.ndarray:
        return np.unique(self.center)


def build_successors(g: Graph, pf: PotentialField | np.ndarray) -> SuccessorMap:
    """Point each node at the lexicographic ``(v, id)`` minimum of its closed neighborhood.

    Edge weights play no part here, only adjacency and potentials.
    """
    v = np.asarray(pf.values if isinstance(pf, PotentialField) else pf, dtype=np.float64)
    n = g.num_nodes
    if len(v) != n:
        raise ValueError(f"potential has {len(v)} values but the graph has {n} nodes")
    src = np.concatenate([np.arange(n), np.repeat(np.arange(n), g.degrees())])
    cand = np.concatenate([np.arange(n), g.indices.astype(np.int64)])
    # Sort candidates by (src, v, id); the first entry per src is the winner.
    order = np.lexsort((cand, v[cand], src))
    first = np.searchsorted(src[order], np.arange(n))
    return SuccessorMap(cand[order][first])


def resolve_centers(s: SuccessorMap) -> ClusterAssignment:
    """Follow successor pointers to their fixed points, compressing paths as it goes.

    Raises:
        DescentCycleError: If a walk revisits a node without reaching a fixed point.
    """
    succ = np.asarray(s.succ, dtype=np.int64)
    n = len(succ)
    center = np.full(n, -1, dtype=np.int64)
    for start in range(n):
        if center[start] >= 0:
            continue
        path = []
        node = start
        while center[node] < 0 and succ[node] != node:
            path.append(node)
            if len(path) > n:
                raise DescentCycleError(f"successor walk from node {start} does not terminate")
            node = succ[node]
        root = node if center[node] < 0 else center[node]
        center[root] = root
        center[path] = root
    uniq, cluster_index = np.unique(center, return_inverse=True)
    return ClusterAssignment(center, cluster_index.astype(np.int64), len(uniq))


def cluster(g: Graph, sigma: float, workers: int = 1) -> ClusterAssignment:
    """Potentials, successor map and center resolution in one call."""
    pf = compute_potentials_parallel(g, sigma, workers)
    return resolve_centers(build_successors(g, pf))
