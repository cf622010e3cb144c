"""Serial vs threaded timing of the potential computation on complete graphs."""

from __future__ import annotations

import time
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .potential import compute_potentials, compute_potentials_parallel

BENCH_FIELDS = ("n", "workers", "serial_ms", "parallel_ms", "speedup")


class BenchMismatchError(AssertionError):
    pass


@dataclass
class BenchRow:
    n: int
    workers: int
    serial_ms: float
    parallel_ms: float

    @property
    def speedup(self) -> float:
        return self.serial_ms / self.parallel_ms if self.parallel_ms > 0 else float("inf")

    def to_row(self) -> dict:
        return {
            "n": self.n,
            "workers": self.workers,
            "serial_ms": round(self.serial_ms, 3),
            "parallel_ms": round(self.parallel_ms, 3),
            "speedup": round(self.speedup, 4),
        }


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, (time.perf_counter() - t0) * 1e3


def run_bench(sizes: Sequence[int], workers: Sequence[int], sigma: float = 1.0, repeats: int = 1) -> list[BenchRow]:
    """Time both engines on unit-weight complete graphs.

    Every parallel result is checked bit-for-bit against the serial one
    before its timing is kept. With ``repeats > 1`` the best time is used.

    Raises:
        BenchMismatchError: If any parallel field differs from the serial one.
    """
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly ascending")
    rows = []
    for n in sizes:
        g = Graph.complete(n)
        serial_ms = float("inf")
        for _ in range(repeats):
            ref, ms = _timed(compute_potentials, g, sigma)
            serial_ms = min(serial_ms, ms)
        for w in workers:
            par_ms = float("inf")
            for _ in range(repeats):
                pf, ms = _timed(compute_potentials_parallel, g, sigma, w)
                if not np.array_equal(pf.values, ref.values):
                    raise BenchMismatchError(f"parallel potentials differ from serial at n={n}, workers={w}")
                par_ms = min(par_ms, ms)
            rows.append(BenchRow(n, w, serial_ms, par_ms))
        del g
    return rows
