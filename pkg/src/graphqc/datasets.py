"""Bundled benchmark data."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .graph import DEFAULT_DISTANCE, Graph, LabelSet, load_edge_list, load_labels


def data_path(name: str) -> Path:
    return Path(str(resources.files("graphqc") / "data" / name))


def karate(default_distance: float = DEFAULT_DISTANCE) -> tuple[Graph, LabelSet]:
    """Zachary's karate club with the two post-split factions as labels."""
    g = load_edge_list(data_path("karate.edges"), default_distance)
    return g, load_labels(data_path("karate.labels"), g)
