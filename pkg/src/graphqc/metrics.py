"""Clustering quality: modularity, ARI, FMI, NMI and best-match F1/accuracy/recall."""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .ggd import ClusterAssignment
from .graph import Graph, LabelMismatchError, LabelSet

logger = logging.getLogger(__name__)

REPORT_FIELDS = ("modularity", "nmi", "ari", "fmi", "f1", "accuracy", "recall", "num_clusters", "sigma")

_EXHAUSTIVE_MAX_K = 8


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """``counts[i, j]`` is the number of nodes with true class ``i`` and predicted cluster ``j``."""

    counts: np.ndarray

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def n(self) -> int:
        return int(self.counts.sum())


@dataclass
class MatchedScores:
    f1: float
    accuracy: float
    recall: float
    mapping: dict[int, int] = field(default_factory=dict)
    per_class: dict[int, dict[str, float]] = field(default_factory=dict)


@dataclass
class MetricReport:
    """One row of results. External metrics are ``None`` when no labels were given."""

    modularity: float | None = None
    nmi: float | None = None
    ari: float | None = None
    fmi: float | None = None
    f1: float | None = None
    accuracy: float | None = None
    recall: float | None = None
    num_clusters: int | None = None
    sigma: float | None = None

    def to_record(self) -> dict:
        return {k: getattr(self, k) for k in REPORT_FIELDS}


def _as_labels(x) -> np.ndarray:
    if isinstance(x, LabelSet):
        return x.labels
    if isinstance(x, ClusterAssignment):
        return x.cluster_index
    return np.asarray(x)


def contingency(truth, pred) -> ContingencyTable:
    """Cross-tabulate two labelings of the same nodes.

    Either argument may be a :class:`LabelSet`, a :class:`ClusterAssignment`
    or a plain sequence. Rows and columns follow sorted label values.
    """
    t, p = _as_labels(truth), _as_labels(pred)
    if t.shape != p.shape:
        raise LabelMismatchError(f"labelings cover {len(t)} and {len(p)} nodes")
    _, ti = np.unique(t, return_inverse=True)
    _, pi = np.unique(p, return_inverse=True)
    counts = np.zeros((ti.max(initial=-1) + 1, pi.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(counts, (ti, pi), 1)
    return ContingencyTable(counts)


def _comb2(x) -> int:
    x = np.asarray(x, dtype=np.int64)
    return int((x * (x - 1) // 2).sum())


def _pair_counts(t: ContingencyTable) -> tuple[int, int, int, int]:
    same_both = _comb2(t.counts)
    same_true = _comb2(t.row_sums)
    same_pred = _comb2(t.col_sums)
    return same_both, same_true, same_pred, t.n * (t.n - 1) // 2


def ari(t: ContingencyTable) -> float:
    """Adjusted Rand index.

    When the chance-corrected denominator is zero, both labelings put every
    node in one group or every node alone; they score 1 if they describe the
    same partition and 0 otherwise.
    """
    if t.n < 2:
        raise ValueError("ARI needs at least two nodes")
    index, sum_a, sum_b, total = _pair_counts(t)
    expected = sum_a * sum_b / total
    max_index = (sum_a + sum_b) / 2
    if max_index == expected:
        return 1.0 if sum_a == sum_b == index else 0.0
    return float((index - expected) / (max_index - expected))


def fmi(t: ContingencyTable) -> float:
    """Fowlkes-Mallows index, 0 (with a warning) if a side has no same-cluster pair."""
    tp, tp_fn, tp_fp, _ = _pair_counts(t)
    if tp_fp == 0 or tp_fn == 0:
        logger.warning("FMI undefined for an all-singleton partition; returning 0")
        return 0.0
    return float(tp / math.sqrt(tp_fp * tp_fn))


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def mutual_info(t: ContingencyTable) -> float:
    """Mutual information in nats."""
    n = t.n
    rows, cols = np.nonzero(t.counts)
    nij = t.counts[rows, cols].astype(np.float64)
    a = t.row_sums[rows].astype(np.float64)
    b = t.col_sums[cols].astype(np.float64)
    return float((nij / n * np.log(nij * n / (a * b))).sum())


def nmi(t: ContingencyTable) -> float:
    """Mutual information normalized by the geometric mean of the two entropies.

    Returns 0 when either labeling has zero entropy.
    """
    if t.n < 1:
        raise ValueError("NMI needs at least one node")
    h_true = _entropy(t.row_sums, t.n)
    h_pred = _entropy(t.col_sums, t.n)
    if h_true == 0.0 or h_pred == 0.0:
        return 0.0
    # Rounding can push identical partitions a hair past 1.
    return float(min(1.0, max(0.0, mutual_info(t) / math.sqrt(h_true * h_pred))))


def modularity(g: Graph, c, gamma: float = 1.0) -> float:
    """Weighted modularity with resolution ``gamma``.

    ``w`` is the sum of the adjacency matrix, i.e. every undirected edge is
    counted in both orientations.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    comm = _as_labels(c)
    if len(comm) != g.num_nodes:
        raise LabelMismatchError(f"assignment covers {len(comm)} nodes, graph has {g.num_nodes}")
    _, comm = np.unique(comm, return_inverse=True)
    strength = g.strengths()
    w = strength.sum()
    if w == 0:
        raise ValueError("modularity is undefined for a graph without edges")
    src = np.repeat(np.arange(g.num_nodes), g.degrees())
    inside = g.weights[comm[src] == comm[g.indices]].sum()
    tot = np.bincount(comm, weights=strength)
    return float((inside - gamma * (tot @ tot) / w) / w)


def _best_mapping(counts: np.ndarray) -> dict[int, int]:
    """Cluster -> class mapping maximizing matched nodes (square ``counts``, classes x clusters)."""
    k = counts.shape[0]
    if k <= _EXHAUSTIVE_MAX_K:
        best, best_perm = -1, None
        for perm in itertools.permutations(range(k)):
            score = sum(int(counts[perm[j], j]) for j in range(k))
            if score > best:
                best, best_perm = score, perm
        return {j: best_perm[j] for j in range(k)}
    # Greedy: repeatedly take the largest remaining cell.
    mapping = {}
    free_rows, free_cols = set(range(k)), set(range(k))
    for flat in np.argsort(-counts, axis=None, kind="stable"):
        i, j = divmod(int(flat), k)
        if i in free_rows and j in free_cols:
            mapping[j] = i
            free_rows.discard(i)
            free_cols.discard(j)
    return mapping


def matched_scores(truth, pred) -> MatchedScores | None:
    """F1, accuracy and recall after matching clusters to classes.

    Only defined when there are as many clusters as classes; returns None
    otherwise. For two classes the class matched to cluster 0 counts as
    positive; for more, F1 and recall are macro averages.
    """
    t = contingency(truth, pred)
    counts = t.counts
    k = counts.shape[0]
    if counts.shape[1] != k:
        return None
    mapping = _best_mapping(counts)
    accuracy = sum(int(counts[mapping[j], j]) for j in range(k)) / t.n
    per_class = {}
    for j in range(k):
        cls = mapping[j]
        tp = int(counts[cls, j])
        pred_pos = int(counts[:, j].sum())
        actual_pos = int(counts[cls, :].sum())
        precision = tp / pred_pos if pred_pos else 0.0
        recall = tp / actual_pos if actual_pos else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[cls] = {"precision": precision, "recall": recall, "f1": f1}
    if k == 2:
        pos = per_class[mapping[0]]
        f1, recall = pos["f1"], pos["recall"]
    else:
        f1 = float(np.mean([d["f1"] for d in per_class.values()]))
        recall = float(np.mean([d["recall"] for d in per_class.values()]))
    return MatchedScores(f1=f1, accuracy=accuracy, recall=recall, mapping=mapping, per_class=per_class)


def evaluate(
    g: Graph | None,
    pred,
    truth: LabelSet | Sequence | None = None,
    gamma: float = 1.0,
    sigma: float | None = None,
) -> MetricReport:
    """Fill a :class:`MetricReport` from whatever inputs are available."""
    labels = _as_labels(pred)
    report = MetricReport(num_clusters=int(len(np.unique(labels))), sigma=sigma)
    if g is not None:
        report.modularity = modularity(g, labels, gamma)
    if truth is not None:
        t = contingency(truth, labels)
        report.nmi = nmi(t)
        report.ari = ari(t) if t.n >= 2 else None
        report.fmi = fmi(t)
        matched = matched_scores(truth, labels)
        if matched is not None:
            report.f1, report.accuracy, report.recall = matched.f1, matched.accuracy, matched.recall
    return report
