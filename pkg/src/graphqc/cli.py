"""Command-line interface: ``graphqc {cluster,sweep,bench,eval}``.

Exit codes: 0 success, 1 I/O or file-format failure, 2 invalid parameters
or mismatched node sets.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bench import BENCH_FIELDS, run_bench
from .ggd import cluster
from .graph import (
    DEFAULT_DISTANCE,
    GraphFormatError,
    LabelMismatchError,
    LabelSet,
    load_edge_list,
    load_labels,
    read_label_file,
)
from .metrics import REPORT_FIELDS, MetricReport, evaluate
from .sweep import default_grid, detect_mutation, run_sweep, write_sweep_csv

log = logging.getLogger("graphqc")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    graph_path: str
    sigma: float = 1.0
    default_distance: float = DEFAULT_DISTANCE
    workers: int = 1
    gamma: float = 1.0
    labels_path: str | None = None
    output_path: str | None = None
    report_path: str | None = None
    output_format: str = "csv"

    def validate(self) -> None:
        _positive("sigma", self.sigma)
        _positive("default distance", self.default_distance)
        _positive("gamma", self.gamma)
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        if self.output_format not in ("csv", "json"):
            raise UsageError("format must be csv or json")


def _positive(name, value) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise UsageError(f"{name} must be positive")


def _fmt(v):
    return "" if v is None else repr(v) if isinstance(v, float) else str(v)


def render_records(rows: list[dict], fields, fmt: str) -> str:
    """Flat records as CSV (header + rows) or a JSON array / object."""
    if fmt == "json":
        payload = rows[0] if len(rows) == 1 and fields is REPORT_FIELDS else rows
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(r[k]) for k in fields})
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _report_text(report: MetricReport, fmt: str) -> str:
    return render_records([report.to_record()], REPORT_FIELDS, fmt)


def cmd_cluster(cfg: RunConfig) -> int:
    cfg.validate()
    g = load_edge_list(cfg.graph_path, cfg.default_distance)
    labels = load_labels(cfg.labels_path, g) if cfg.labels_path else None
    a = cluster(g, cfg.sigma, cfg.workers)
    rows = [
        {"node": g.names[i], "center": g.names[a.center[i]], "cluster": int(a.cluster_index[i])}
        for i in range(g.num_nodes)
    ]
    report = evaluate(g if g.num_edges else None, a, labels, cfg.gamma, cfg.sigma)
    _emit(render_records(rows, ("node", "center", "cluster"), cfg.output_format), cfg.output_path)
    if not cfg.output_path and not cfg.report_path:
        sys.stdout.write("\n")
    _emit(_report_text(report, cfg.output_format), cfg.report_path)
    return 0


def sweep_grid(cfg: RunConfig, sigma_min, sigma_max, steps: int, log_grid: bool) -> np.ndarray:
    if steps < 1:
        raise UsageError("sigma-steps must be at least 1")
    if sigma_min is None and sigma_max is None:
        return default_grid(cfg.default_distance, steps)
    lo = sigma_min if sigma_min is not None else 0.1 * cfg.default_distance
    hi = sigma_max if sigma_max is not None else 3.0 * cfg.default_distance
    _positive("sigma", lo)
    _positive("sigma", hi)
    if steps == 1:
        return np.array([lo])
    if hi <= lo:
        raise UsageError("sigma-max must exceed sigma-min")
    return np.geomspace(lo, hi, steps) if log_grid else np.linspace(lo, hi, steps)


def cmd_sweep(cfg: RunConfig, sigma_min=None, sigma_max=None, steps: int = 30, log_grid: bool = False) -> int:
    cfg.validate()
    grid = sweep_grid(cfg, sigma_min, sigma_max, steps, log_grid)
    g = load_edge_list(cfg.graph_path, cfg.default_distance)
    labels = load_labels(cfg.labels_path, g) if cfg.labels_path else None
    records = run_sweep(g, grid, labels, cfg.workers, cfg.gamma)
    text = write_sweep_csv(records)
    _emit(text, cfg.output_path)
    m = detect_mutation(records) if len(records) >= 2 else None
    msg = "mutation: none" if m is None else f"mutation: sigma {m.sigma_low!r} -> {m.sigma_high!r}, drop {m.drop}"
    print(msg, file=sys.stderr if not cfg.output_path else sys.stdout)
    return 0


def cmd_bench(sizes, workers, output_path=None, sigma: float = 1.0, repeats: int = 1) -> int:
    if not sizes or any(n < 1 for n in sizes):
        raise UsageError("sizes must be positive node counts")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise UsageError("sizes must be strictly ascending")
    if not workers or any(w < 1 for w in workers):
        raise UsageError("workers must be at least 1")
    _positive("sigma", sigma)
    rows = run_bench(sizes, workers, sigma, repeats)
    _emit(render_records([r.to_row() for r in rows], BENCH_FIELDS, "csv"), output_path)
    return 0


def cmd_eval(truth_path, pred_path, graph_path=None, default_distance=DEFAULT_DISTANCE, gamma=1.0, fmt="csv") -> int:
    truth = read_label_file(truth_path)
    pred = read_label_file(pred_path)
    if set(truth) != set(pred):
        only = sorted(set(truth) ^ set(pred))
        raise LabelMismatchError(f"label files cover different nodes (e.g. {only[0]!r})")
    g = None
    if graph_path:
        g = load_edge_list(graph_path, default_distance)
        order = list(g.names)
        if set(order) != set(truth):
            raise LabelMismatchError("graph and label files cover different nodes")
    else:
        order = sorted(truth)
    t = LabelSet.from_values([truth[s] for s in order])
    p = LabelSet.from_values([pred[s] for s in order])
    report = evaluate(g, p.labels, t, gamma)
    _emit(_report_text(report, fmt), None)
    return 0


def _add_run_options(p: argparse.ArgumentParser, sigma_required: bool) -> None:
    p.add_argument("graph", help="edge-list file: 'u v' or 'u v w' per line, '#' comments")
    if sigma_required:
        p.add_argument("--sigma", type=float, required=True, help="Gaussian width parameter (> 0)")
    p.add_argument("--default-distance", type=float, default=DEFAULT_DISTANCE,
                   help="distance between non-adjacent nodes (default %(default)s)")
    p.add_argument("--workers", type=int, default=1, help="threads for the potential computation")
    p.add_argument("--gamma", type=float, default=1.0, help="modularity resolution (default 1.0)")
    p.add_argument("--labels", help="ground-truth 'node label' file; enables NMI/ARI/FMI")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphqc", description="Quantum clustering of graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a graph at one sigma")
    _add_run_options(p, sigma_required=True)
    p.add_argument("--report", help="metric report file (default: stdout)")

    p = sub.add_parser("sweep", help="cluster over a sigma grid and locate the mutation")
    _add_run_options(p, sigma_required=False)
    p.add_argument("--sigma-min", type=float, help="smallest sigma (default 0.1 x default distance)")
    p.add_argument("--sigma-max", type=float, help="largest sigma (default 3 x default distance)")
    p.add_argument("--sigma-steps", type=int, default=30, help="grid size (default 30)")
    p.add_argument("--log-grid", action="store_true", help="log-spaced grid (default when no bounds given)")

    p = sub.add_parser("bench", help="time serial vs threaded potentials on complete graphs")
    p.add_argument("--sizes", type=int, nargs="+", default=[1000, 5000, 10000], help="ascending node counts")
    p.add_argument("--workers", type=int, nargs="+", default=[1, 2, 4, 8], help="thread counts to time")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--repeats", type=int, default=1, help="keep the best of this many runs")
    p.add_argument("--out", help="CSV output file (default: stdout)")

    p = sub.add_parser("eval", help="score a predicted labeling against ground truth")
    p.add_argument("truth", help="'node label' ground-truth file")
    p.add_argument("pred", help="'node label' predicted file")
    p.add_argument("--graph", help="edge list; adds modularity to the report")
    p.add_argument("--default-distance", type=float, default=DEFAULT_DISTANCE)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        graph_path=args.graph,
        sigma=getattr(args, "sigma", None) or 1.0,
        default_distance=args.default_distance,
        workers=args.workers,
        gamma=args.gamma,
        labels_path=args.labels,
        output_path=args.out,
        report_path=getattr(args, "report", None),
        output_format=args.format,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "cluster":
            cfg = _config(args)
            cfg.sigma = args.sigma
            return cmd_cluster(cfg)
        if args.command == "sweep":
            return cmd_sweep(_config(args), args.sigma_min, args.sigma_max, args.sigma_steps,
                             args.log_grid or (args.sigma_min is None and args.sigma_max is None))
        if args.command == "bench":
            return cmd_bench(args.sizes, args.workers, args.out, args.sigma, args.repeats)
        return cmd_eval(args.truth, args.pred, args.graph, args.default_distance, args.gamma, args.format)
    except (GraphFormatError, OSError, MemoryError) as exc:
        print(f"graphqc: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"graphqc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
