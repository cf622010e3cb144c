"""Regenerate reports/karate_repro.md and the karate sweep CSVs."""

import sys
from pathlib import Path

from graphqc.repro import write_report

if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "reports"
    report, _ = write_report(out)
    print(report)
