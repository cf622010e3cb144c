"""Sweeps over sigma and detection of the sharpest drop in cluster count."""

from __future__ import annotations

import csv
import io
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ggd import ClusterAssignment, cluster
from .graph import Graph, LabelSet
from .metrics import MetricReport, evaluate

SWEEP_FIELDS = ("sigma", "num_clusters", "modularity", "nmi", "ari", "fmi")


@dataclass
class SweepRecord:
    sigma: float
    num_clusters: int
    metrics: MetricReport
    assignment: ClusterAssignment | None = None

    def to_row(self) -> dict:
        return {
            "sigma": self.sigma,
            "num_clusters": self.num_clusters,
            "modularity": self.metrics.modularity,
            "nmi": self.metrics.nmi,
            "ari": self.metrics.ari,
            "fmi": self.metrics.fmi,
        }


@dataclass(frozen=True)
class MutationInterval:
    sigma_low: float
    sigma_high: float
    drop: int


def default_grid(default_distance: float, steps: int = 30) -> np.ndarray:
    """Log-spaced sigmas from 0.1 W to 3 W."""
    return np.geomspace(0.1 * default_distance, 3.0 * default_distance, steps)


def linear_grid(lo: float, hi: float, steps: int) -> np.ndarray:
    return np.linspace(lo, hi, steps)


def _check_grid(sigmas: Sequence[float]) -> list[float]:
    sigmas = [float(s) for s in sigmas]
    if not sigmas:
        raise ValueError("sigma grid is empty")
    if any(not s > 0 for s in sigmas):
        raise ValueError("sigma must be positive")
    if any(b <= a for a, b in zip(sigmas, sigmas[1:])):
        raise ValueError("sigma grid must be strictly ascending")
    return sigmas


def run_sweep(
    g: Graph,
    sigmas: Sequence[float],
    labels: LabelSet | None = None,
    workers: int = 1,
    gamma: float = 1.0,
    keep_assignments: bool = False,
) -> list[SweepRecord]:
    """Cluster ``g`` at every sigma and score each result."""
    records = []
    has_edges = g.num_edges > 0
    for s in _check_grid(sigmas):
        a = cluster(g, s, workers)
        report = evaluate(g if has_edges else None, a, labels, gamma=gamma, sigma=s)
        records.append(SweepRecord(s, a.num_clusters, report, a if keep_assignments else None))
    return records


def detect_mutation(records: Sequence[SweepRecord]) -> MutationInterval | None:
    """Consecutive sigma pair with the largest cluster-count decrease.

    Ties go to the smallest ``sigma_low``. Returns None if the count never drops.
    """
    if len(records) < 2:
        raise ValueError("mutation detection needs at least two sweep records")
    best = None
    for prev, cur in zip(records, records[1:]):
        drop = prev.num_clusters - cur.num_clusters
        if drop >= 1 and (best is None or drop > best.drop):
            best = MutationInterval(prev.sigma, cur.sigma, drop)
    return best


def write_sweep_csv(records: Sequence[SweepRecord], path: str | Path | None = None) -> str:
    """Render records as CSV; also writes them to ``path`` when given."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({k: "" if v is None else repr(v) for k, v in r.to_row().items()})
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_sweep_csv(path: str | Path) -> list[SweepRecord]:
    """Parse a sweep CSV written by :func:`write_sweep_csv`."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != SWEEP_FIELDS:
            raise ValueError(f"unexpected sweep header {reader.fieldnames}")
        out = []
        for row in reader:
            opt = {k: (float(row[k]) if row[k] else None) for k in ("modularity", "nmi", "ari", "fmi")}
            n = int(row["num_clusters"])
            out.append(SweepRecord(float(row["sigma"]), n, MetricReport(num_clusters=n, sigma=float(row["sigma"]), **opt)))
        return out
