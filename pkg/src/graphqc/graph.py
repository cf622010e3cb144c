"""Undirected weighted graphs, edge-list / label-file ingestion and basic queries.

Edge-list files are UTF-8 text with one edge per line, ``u v`` or ``u v w``.
Lines starting with ``#`` and blank lines are ignored. Node names are
arbitrary whitespace-free strings and are renumbered to dense ids
``0..N-1`` in order of first appearance.

Label files hold one ``node label`` pair per line, same comment rules.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_DISTANCE = 10.0


class GraphFormatError(ValueError):
    """Raised for unreadable edge-list or label file contents."""


class LabelMismatchError(ValueError):
    """Raised when a labeling does not cover exactly the expected node set."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected weighted graph in CSR form.

    ``indices[indptr[i]:indptr[i+1]]`` are the neighbors of node ``i`` in
    ascending order and ``weights`` the matching edge weights. Pairs that are
    not adjacent are at ``default_distance`` from each other.
    """

    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    default_distance: float = DEFAULT_DISTANCE
    names: tuple[str, ...] = ()
    _name_to_id: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        n = len(self.indptr) - 1
        if n < 1:
            raise ValueError("graph must have at least one node")
        if not self.default_distance > 0 or not math.isfinite(self.default_distance):
            raise ValueError("default distance must be positive and finite")
        if len(self.weights) and not np.all(self.weights > 0):
            raise ValueError("edge weights must be positive")
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(n)))
        if len(self.names) != n:
            raise ValueError("names must have one entry per node")
        object.__setattr__(self, "_name_to_id", {s: i for i, s in enumerate(self.names)})
        for arr in (self.indptr, self.indices, self.weights):
            arr.setflags(write=False)

    @classmethod
    def from_edges(
        cls,
        num_nodes: int,
        edges: Iterable[tuple[int, int, float]],
        default_distance: float = DEFAULT_DISTANCE,
        names: Sequence[str] | None = None,
    ) -> Graph:
        """Build a graph from ``(u, v, w)`` triples over dense ids.

        Self-loops are dropped. A repeated pair keeps its first weight; a
        conflicting repeat is logged as a warning.
        """
        seen: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise ValueError(f"edge ({u}, {v}) references a node outside 0..{num_nodes - 1}")
            if not w > 0 or not math.isfinite(w):
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                if seen[key] != w:
                    logger.warning(
                        "conflicting weights for edge %s: keeping %g, ignoring %g", key, seen[key], w
                    )
                continue
            seen[key] = w
        return cls._from_pairs(num_nodes, seen, default_distance, names)

    @classmethod
    def _from_pairs(cls, num_nodes, pairs, default_distance, names) -> Graph:
        m = len(pairs)
        src = np.empty(2 * m, dtype=np.int64)
        dst = np.empty(2 * m, dtype=np.int64)
        wts = np.empty(2 * m, dtype=np.float64)
        if m:
            uv = np.array(list(pairs.keys()), dtype=np.int64)
            w = np.fromiter(pairs.values(), dtype=np.float64, count=m)
            src[:m], dst[:m], wts[:m] = uv[:, 0], uv[:, 1], w
            src[m:], dst[m:], wts[m:] = uv[:, 1], uv[:, 0], w
        order = np.lexsort((dst, src))
        src, dst, wts = src[order], dst[order], wts[order]
        indptr = np.zeros(num_nodes + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=num_nodes), out=indptr[1:])
        return cls(
            indptr=indptr,
            indices=dst,
            weights=wts,
            default_distance=float(default_distance),
            names=tuple(names) if names is not None else (),
        )

    @classmethod
    def complete(cls, num_nodes: int, weight: float = 1.0, default_distance: float = DEFAULT_DISTANCE) -> Graph:
        """Complete graph ``K_n`` with a uniform edge weight."""
        n = int(num_nodes)
        if n < 1:
            raise ValueError("graph must have at least one node")
        # Every row is 0..n-1 minus the diagonal; build it without Python loops.
        cols = np.tile(np.arange(n - 1, dtype=np.int32), n).reshape(n, n - 1)
        cols += cols >= np.arange(n, dtype=np.int32)[:, None]
        indptr = np.arange(n + 1, dtype=np.int64) * (n - 1)
        wts = np.full(n * (n - 1), float(weight))
        return cls(indptr=indptr, indices=cols.ravel(), weights=wts, default_distance=default_distance)

    @property
    def num_nodes(self) -> int:
        return len(self.indptr) - 1

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def degree(self, i: int) -> int:
        self._check(i)
        return int(self.indptr[i + 1] - self.indptr[i])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def strengths(self) -> np.ndarray:
        """Sum of incident edge weights per node."""
        out = np.zeros(self.num_nodes)
        np.add.at(out, np.repeat(np.arange(self.num_nodes), self.degrees()), self.weights)
        return out

    def index_of(self, name: str) -> int:
        try:
            return self._name_to_id[str(name)]
        except KeyError:
            raise KeyError(f"unknown node {name!r}") from None

    def edges(self) -> list[tuple[int, int, float]]:
        """Each undirected edge once, as ``(u, v, w)`` with ``u < v``, sorted."""
        out = []
        for u in range(self.num_nodes):
            lo, hi = self.indptr[u], self.indptr[u + 1]
            for v, w in zip(self.indices[lo:hi].tolist(), self.weights[lo:hi].tolist()):
                if u < v:
                    out.append((u, v, w))
        return out

    def with_scaled_distances(self, factor: float) -> Graph:
        """Copy with every edge weight and the default distance multiplied by ``factor``."""
        return Graph(
            indptr=self.indptr.copy(),
            indices=self.indices.copy(),
            weights=self.weights * factor,
            default_distance=self.default_distance * factor,
            names=self.names,
        )

    def connected_components(self) -> np.ndarray:
        """Component label per node, numbered by smallest member id."""
        comp = np.full(self.num_nodes, -1, dtype=np.int64)
        label = 0
        for start in range(self.num_nodes):
            if comp[start] >= 0:
                continue
            comp[start] = label
            stack = [start]
            while stack:
                u = stack.pop()
                for v in self.indices[self.indptr[u]:self.indptr[u + 1]].tolist():
                    if comp[v] < 0:
                        comp[v] = label
                        stack.append(v)
            label += 1
        return comp

    def _check(self, i: int) -> None:
        if not 0 <= i < self.num_nodes:
            raise IndexError(f"node id {i} out of range 0..{self.num_nodes - 1}")


def neighbors(g: Graph, i: int) -> list[tuple[int, float]]:
    """Neighbors of ``i`` with edge weights, ascending by neighbor id."""
    g._check(i)
    lo, hi = g.indptr[i], g.indptr[i + 1]
    return list(zip(g.indices[lo:hi].tolist(), g.weights[lo:hi].tolist()))


def pairwise_distance(g: Graph, i: int, j: int) -> float:
    """Distance used by the potential: 0 on the diagonal, the edge weight for
    adjacent pairs, ``g.default_distance`` otherwise."""
    g._check(i)
    g._check(j)
    if i == j:
        return 0.0
    lo, hi = g.indptr[i], g.indptr[i + 1]
    k = lo + np.searchsorted(g.indices[lo:hi], j)
    if k < hi and g.indices[k] == j:
        return float(g.weights[k])
    return g.default_distance


def _content_lines(path: Path) -> Iterable[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line.split()


def load_edge_list(path: str | Path, default_distance: float = DEFAULT_DISTANCE) -> Graph:
    """Read an edge-list file.

    Args:
        path: File with ``u v`` or ``u v w`` per line. A missing weight is 1.0.
        default_distance: Distance between non-adjacent nodes.

    Returns:
        The graph, with node names renumbered in first-appearance order.

    Raises:
        GraphFormatError: On a malformed line, a non-positive weight, or a
            file without edges.
    """
    path = Path(path)
    ids: dict[str, int] = {}
    edges = []
    for lineno, parts in _content_lines(path):
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"{path}:{lineno}: expected 'u v' or 'u v w', got {' '.join(parts)!r}")
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: weight {parts[2]!r} is not a number") from None
            if not w > 0 or not math.isfinite(w):
                raise GraphFormatError(f"{path}:{lineno}: weight must be positive, got {parts[2]}")
        u = ids.setdefault(parts[0], len(ids))
        v = ids.setdefault(parts[1], len(ids))
        edges.append((u, v, w))
    if not ids:
        raise GraphFormatError(f"{path}: no edges found")
    return Graph.from_edges(len(ids), edges, default_distance, names=list(ids))


def write_edge_list(g: Graph, path: str | Path) -> None:
    """Write ``g`` as an edge list, one ``u v w`` line per undirected edge.

    Reloading gives the same graph up to dense-id order, which follows first
    appearance in the file. Isolated nodes cannot be represented and are
    rejected.
    """
    if np.any(g.degrees() == 0):
        raise ValueError("edge-list format cannot represent isolated nodes")
    lines = [f"{g.names[u]} {g.names[v]} {w!r}" for u, v, w in g.edges()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True, eq=False)
class LabelSet:
    """Ground-truth class per node, densely numbered ``0..K-1``."""

    labels: np.ndarray
    label_names: tuple[str, ...]

    @property
    def num_classes(self) -> int:
        return len(self.label_names)

    @classmethod
    def from_values(cls, values: Sequence) -> LabelSet:
        """Densely renumber arbitrary label values; numeric names sort numerically."""
        text = [str(x) for x in values]
        distinct = sorted(set(text), key=_label_sort_key)
        index = {s: k for k, s in enumerate(distinct)}
        return cls(np.array([index[s] for s in text], dtype=np.int64), tuple(distinct))


def _label_sort_key(s: str):
    try:
        return (0, float(s), s)
    except ValueError:
        return (1, 0.0, s)


def read_label_file(path: str | Path) -> dict[str, str]:
    """Parse a ``node label`` file into a name -> label mapping."""
    path = Path(path)
    out: dict[str, str] = {}
    for lineno, parts in _content_lines(path):
        if len(parts) != 2:
            raise GraphFormatError(f"{path}:{lineno}: expected 'node label', got {' '.join(parts)!r}")
        node, label = parts
        if node in out and out[node] != label:
            raise LabelMismatchError(f"{path}:{lineno}: conflicting labels for node {node!r}")
        out[node] = label
    return out


def load_labels(path: str | Path, g: Graph) -> LabelSet:
    """Read a label file and align it with the nodes of ``g``.

    Raises:
        LabelMismatchError: If a node of ``g`` has no label, the file names a
            node that ``g`` does not have, or a node has two different labels.
    """
    mapping = read_label_file(path)
    unknown = sorted(set(mapping) - set(g.names))
    if unknown:
        raise LabelMismatchError(f"unknown node {unknown[0]!r} in {path}")
    missing = [s for s in g.names if s not in mapping]
    if missing:
        raise LabelMismatchError(f"unlabeled node {missing[0]!r} in {path}")
    return LabelSet.from_values([mapping[s] for s in g.names])
