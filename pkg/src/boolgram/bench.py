"""Stack size and running time of the parser against input length."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import numpy as np

from .gss import Recognizer


@dataclass(frozen=True)
class BenchRow:
    length: int
    nodes: int
    edges: int
    nanos: int


def run_bench(rec: Recognizer, lengths, seed: int = 0) -> list[BenchRow]:
    """Parse one uniform random word per length (same seed, same words)."""
    rng = random.Random(seed)
    alphabet = "".join(rec.grammar.alphabet)
    rows = []
    for n in lengths:
        w = "".join(rng.choice(alphabet) for _ in range(n))
        t0 = time.perf_counter_ns()
        result = rec.parse(w)
        elapsed = time.perf_counter_ns() - t0
        rows.append(BenchRow(n, result.nodes, result.edges, elapsed))
    return rows


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    if len(xs) < 2:
        raise ValueError("need at least two points for a slope")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def slopes(rows: list[BenchRow]) -> dict[str, float] | None:
    if len(rows) < 2:
        return None
    xs = [r.length for r in rows]
    return {
        "edges": loglog_slope(xs, [max(r.edges, 1) for r in rows]),
        "time": loglog_slope(xs, [r.nanos for r in rows]),
    }
