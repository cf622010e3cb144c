import csv
import io
import json
import math

import pytest

from graphqc.cli import main
from graphqc.metrics import REPORT_FIELDS


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def small(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("a b\nb c\nc a\nd e\ne f\nf d\n")
    lab = tmp_path / "l.txt"
    lab.write_text("a 0\nb 0\nc 0\nd 1\ne 1\nf 1\n")
    return g, lab


def test_cluster_with_labels(tmp_path, capsys, karate_files):
    edges, labels = karate_files
    out, rep = tmp_path / "assign.csv", tmp_path / "report.csv"
    code, _, _ = run(capsys, "cluster", edges, "--sigma", 20, "--labels", labels, "--out", out, "--report", rep)
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 34 and list(rows[0]) == ["node", "center", "cluster"]
    assert {r["center"] for r in rows} == {"0", "33"}
    report = list(csv.DictReader(rep.open()))[0]
    assert list(report) == list(REPORT_FIELDS)
    assert report["num_clusters"] == "2"
    assert all(report[k] for k in REPORT_FIELDS)


def test_cluster_json_without_labels(tmp_path, capsys, small):
    g, _ = small
    rep = tmp_path / "r.json"
    code, out, _ = run(capsys, "cluster", g, "--sigma", 20, "--format", "json", "--report", rep)
    assert code == 0
    assign = json.loads(out)
    assert [r["node"] for r in assign] == list("abcdef")
    report = json.loads(rep.read_text())
    assert list(report) == list(REPORT_FIELDS)
    assert report["modularity"] == pytest.approx(0.5)
    assert report["nmi"] is None and report["ari"] is None and report["fmi"] is None
    assert report["num_clusters"] == 2


def test_cluster_stdout_both(capsys, small):
    g, lab = small
    code, out, _ = run(capsys, "cluster", g, "--sigma", 20, "--labels", lab)
    assert code == 0
    assignment, report = out.split("\n\n")
    assert assignment.startswith("node,center,cluster")
    assert report.startswith(",".join(REPORT_FIELDS))


@pytest.mark.parametrize(
    "flag, value, msg",
    [
        ("--sigma", -1, "sigma must be positive"),
        ("--default-distance", 0, "default distance must be positive"),
        ("--gamma", -2, "gamma must be positive"),
        ("--workers", 0, "workers must be at least 1"),
    ],
)
def test_cluster_invalid_parameters(capsys, small, flag, value, msg):
    g, _ = small
    args = ["cluster", g, "--sigma", 1.0, flag, value]
    code, _, err = run(capsys, *args)
    assert code == 2
    assert msg in err


def test_cluster_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "cluster", tmp_path / "nope.txt", "--sigma", 1)
    assert code == 1 and "error" in err


def test_cluster_malformed_file(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("a b c d\n")
    code, _, err = run(capsys, "cluster", p, "--sigma", 1)
    assert code == 1 and ":1:" in err


def test_cluster_unlabeled_node(tmp_path, capsys, small):
    g, _ = small
    lab = tmp_path / "partial.txt"
    lab.write_text("a 0\n")
    code, _, err = run(capsys, "cluster", g, "--sigma", 1, "--labels", lab)
    assert code == 2 and "unlabeled node" in err


def test_cluster_deterministic(tmp_path, capsys, karate_files):
    edges, labels = karate_files
    outs = []
    for k in range(2):
        o, r = tmp_path / f"a{k}.csv", tmp_path / f"r{k}.json"
        run(capsys, "cluster", edges, "--sigma", 3, "--labels", labels, "--workers", 4,
            "--out", o, "--report", r, "--format", "json")
        outs.append((o.read_bytes(), r.read_bytes()))
    assert outs[0] == outs[1]


def test_sweep_writes_csv_and_mutation(tmp_path, capsys, karate_files):
    edges, labels = karate_files
    out = tmp_path / "sweep.csv"
    code, stdout, _ = run(capsys, "sweep", edges, "--labels", labels, "--out", out)
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 30
    assert list(rows[0]) == ["sigma", "num_clusters", "modularity", "nmi", "ari", "fmi"]
    counts = [int(r["num_clusters"]) for r in rows]
    assert counts[0] > counts[-1] == 2
    assert stdout.startswith("mutation: sigma")


def test_sweep_single_point(tmp_path, capsys, small):
    g, _ = small
    out = tmp_path / "s.csv"
    code, stdout, _ = run(capsys, "sweep", g, "--sigma-min", 2, "--sigma-steps", 1, "--out", out)
    assert code == 0
    assert len(out.read_text().splitlines()) == 2
    assert "mutation: none" in stdout


def test_sweep_linear_grid_passthrough(tmp_path, capsys, karate_files):
    from graphqc.datasets import karate
    from graphqc.sweep import detect_mutation, read_sweep_csv

    edges, _ = karate_files
    out = tmp_path / "s.csv"
    code, stdout, _ = run(capsys, "sweep", edges, "--sigma-min", 0.5, "--sigma-max", 5, "--sigma-steps", 10, "--out", out)
    assert code == 0
    m = detect_mutation(read_sweep_csv(out))
    assert f"mutation: sigma {m.sigma_low!r} -> {m.sigma_high!r}, drop {m.drop}" in stdout


def test_sweep_bad_grid(capsys, small):
    g, _ = small
    code, _, err = run(capsys, "sweep", g, "--sigma-min", 5, "--sigma-max", 1)
    assert code == 2


def test_bench_small(tmp_path, capsys):
    out = tmp_path / "b.csv"
    code, _, _ = run(capsys, "bench", "--sizes", 50, 100, "--workers", 1, 2, "--out", out)
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["n", "workers", "serial_ms", "parallel_ms", "speedup"]
    assert [(r["n"], r["workers"]) for r in rows] == [("50", "1"), ("50", "2"), ("100", "1"), ("100", "2")]
    for r in rows:
        assert math.isfinite(float(r["speedup"])) and float(r["speedup"]) > 0


def test_bench_rejects_unsorted(capsys):
    code, _, err = run(capsys, "bench", "--sizes", 100, 50)
    assert code == 2 and "ascending" in err


def test_eval_identical(tmp_path, capsys, small):
    _, lab = small
    code, out, _ = run(capsys, "eval", lab, lab)
    assert code == 0
    rec = next(csv.DictReader(io.StringIO(out)))
    assert float(rec["nmi"]) == float(rec["ari"]) == float(rec["fmi"]) == 1.0
    assert rec["modularity"] == ""


def test_eval_hand_example(tmp_path, capsys):
    t, p = tmp_path / "t.txt", tmp_path / "p.txt"
    t.write_text("n1 0\nn2 0\nn3 1\nn4 1\n")
    p.write_text("n1 0\nn2 0\nn3 0\nn4 1\n")
    code, out, _ = run(capsys, "eval", t, p, "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["ari"] == 0.0
    assert rec["fmi"] == pytest.approx(1 / math.sqrt(6), abs=1e-15)


def test_eval_with_graph_adds_modularity(capsys, small):
    g, lab = small
    code, out, _ = run(capsys, "eval", lab, lab, "--graph", g, "--format", "json")
    assert json.loads(out)["modularity"] == pytest.approx(0.5)


def test_eval_mismatched_nodes(tmp_path, capsys, small):
    _, lab = small
    other = tmp_path / "o.txt"
    other.write_text("a 0\nb 0\n")
    code, _, err = run(capsys, "eval", lab, other)
    assert code == 2 and "different nodes" in err


def test_help_lists_flags(capsys):
    with pytest.raises(SystemExit):
        main(["cluster", "--help"])
    out = capsys.readouterr().out
    for flag in ("--sigma", "--default-distance", "--workers", "--gamma", "--labels", "--out", "--format"):
        assert flag in out
    with pytest.raises(SystemExit):
        main(["sweep", "--help"])
    out = capsys.readouterr().out
    for flag in ("--sigma-min", "--sigma-max", "--sigma-steps", "--log-grid"):
        assert flag in out
