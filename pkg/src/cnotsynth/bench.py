"""Seeded, reproducible benchmark harness.

Random instances are drawn per (experiment, case, sample-index) with RNGs
derived from the master seed by hashing, so identical seeds reproduce
identical CSV bytes regardless of execution order.  Every synthesized
circuit is equivalence-checked and connectivity-checked before its size or
depth enters a mean; a failure aborts with the deriving key so the exact
instance can be replayed.
"""

from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import circuit as circ
from .circuit import CnotCircuit, CnotGate
from .gf2 import GF2Matrix, random_invertible
from .gridsynth import GridLayout, synthesize_grid_depth
from .rowcol import synthesize_rowcol
from .sbe import synthesize_sbe
from .topology import TopologyGraph, grid_graph, validate_circuit


class VerificationError(AssertionError):
    """A benchmark sample failed its equivalence or connectivity check."""

    def __init__(self, message: str, key: tuple):
        super().__init__(f"{message} (rng key {key!r})")
        self.key = key


@dataclass(frozen=True)
class BenchRecord:
    """Aggregated result of one (graph, algorithm, input-size) cell."""

    graph_id: str
    algo_id: str
    input_size: int
    samples: int
    mean_size: float
    mean_depth: float
    seed: int
    millis: float


SIZE_ALGOS = {
    "rowcol": lambda m, g: synthesize_rowcol(m, g),
    "rowcol-bfsleaf": lambda m, g: synthesize_rowcol(m, g, strategy="bfsleaf"),
    "sbe": lambda m, g: synthesize_sbe(m, g),
}


def derive_rng(seed: int, *parts) -> random.Random:
    """Stable per-case RNG: hash the master seed with the case key."""
    text = repr((seed,) + parts).encode()
    digest = hashlib.sha256(text).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def sample_walk_circuit(
    g: TopologyGraph, size: int, rng: random.Random
) -> CnotCircuit:
    """Random constrained circuit: each gate is a uniform edge + direction."""
    if size < 0:
        raise ValueError("size must be non-negative")
    edges = g.edges()
    gates = []
    for _ in range(size):
        u, v = edges[rng.randrange(len(edges))]
        if rng.randrange(2):
            u, v = v, u
        gates.append(CnotGate(u, v))
    return CnotCircuit(g.num_vertices, gates)


def run_size_experiment(
    graphs: Sequence[tuple[str, TopologyGraph]],
    sizes: Iterable[int],
    samples: int,
    algos: Sequence[str],
    seed: int,
) -> list[BenchRecord]:
    """Sample constrained circuits and measure optimized sizes per algorithm.

    For each (graph, input size): ``samples`` random walk circuits are
    turned into matrices and re-synthesized by every algorithm; each
    output is verified for equivalence and graph validity.
    """
    records = []
    for name, g in graphs:
        for size in sizes:
            sums = {a: [0, 0] for a in algos}
            t0 = time.perf_counter()
            for i in range(samples):
                key = (seed, "size", name, size, i)
                rng = derive_rng(*key)
                target = circ.to_matrix(sample_walk_circuit(g, size, rng))
                for algo in algos:
                    out = SIZE_ALGOS[algo](target, g)
                    if not circ.implements_matrix(out, target):
                        raise VerificationError(
                            f"{algo} output not equivalent", key
                        )
                    if not validate_circuit(g, out):
                        raise VerificationError(
                            f"{algo} output violates the graph", key
                        )
                    sums[algo][0] += out.size
                    sums[algo][1] += circ.depth(out)
            millis = (time.perf_counter() - t0) * 1000.0
            for algo in algos:
                records.append(
                    BenchRecord(
                        graph_id=name,
                        algo_id=algo,
                        input_size=size,
                        samples=samples,
                        mean_size=sums[algo][0] / samples,
                        mean_depth=sums[algo][1] / samples,
                        seed=seed,
                        millis=millis,
                    )
                )
    return records


def depth_layout_for(inputs: int) -> GridLayout:
    """Layout rule for the depth experiment: an inputs x inputs grid.

    The square grid with n^2 cells is the shallow end of the legal
    trade-off (3n <= cells <= n^2) and is what the depth comparison
    assumes; the cell count is reported in the CSV header.
    """
    return GridLayout((inputs, inputs), inputs)


def run_depth_experiment(
    sides: Iterable[int],
    samples: int,
    algos: Sequence[str] = ("grid-depth", "rowcol"),
    seed: int = 0,
) -> list[BenchRecord]:
    """Compare optimized depth on w x w grids, w^2 inputs per side w.

    ``rowcol`` runs ancilla-free on the w x w grid graph; ``grid-depth``
    runs on the ancilla layout from :func:`depth_layout_for`.  Matrices
    are uniform invertible samples.  Every output is equivalence-verified
    (including ancilla restoration) before entering the means.
    """
    records = []
    for w in sides:
        n = w * w
        small = grid_graph(w, w)
        layout = depth_layout_for(n)
        big = grid_graph(*layout.dims) if "grid-depth" in algos else None
        data_wires = layout.data_wires()
        sums = {a: [0, 0] for a in algos}
        t0 = time.perf_counter()
        for i in range(samples):
            key = (seed, "depth", w, i)
            rng = derive_rng(*key)
            target = random_invertible(n, rng)
            for algo in algos:
                if algo == "rowcol":
                    out = synthesize_rowcol(target, small)
                    ok = circ.implements_matrix(out, target) and validate_circuit(
                        small, out
                    )
                elif algo == "grid-depth":
                    out = synthesize_grid_depth(target, layout, check=False)
                    ok = circ.implements_matrix(
                        out, target, data_wires
                    ) and validate_circuit(big, out)
                else:
                    raise ValueError(f"unknown depth algo {algo!r}")
                if not ok:
                    raise VerificationError(f"{algo} output failed checks", key)
                sums[algo][0] += out.size
                sums[algo][1] += circ.depth(out)
        millis = (time.perf_counter() - t0) * 1000.0
        for algo in algos:
            graph_id = (
                f"grid({w},{w})"
                if algo == "rowcol"
                else f"grid({layout.dims[0]},{layout.dims[1]})+anc"
            )
            records.append(
                BenchRecord(
                    graph_id=graph_id,
                    algo_id=algo,
                    input_size=n,
                    samples=samples,
                    mean_size=sums[algo][0] / samples,
                    mean_depth=sums[algo][1] / samples,
                    seed=seed,
                    millis=millis,
                )
            )
    return records


CSV_COLUMNS = "graph,algo,input_size,samples,mean_size,mean_depth,seed"


def to_csv(records: Iterable[BenchRecord], header_lines: Iterable[str] = ()) -> str:
    """Render records as CSV; wall-clock times stay out so bytes reproduce."""
    lines = [f"# {h}" for h in header_lines]
    lines.append(CSV_COLUMNS)
    for r in records:
        lines.append(
            f"{r.graph_id},{r.algo_id},{r.input_size},{r.samples},"
            f"{r.mean_size:.4f},{r.mean_depth:.4f},{r.seed}"
        )
    return "\n".join(lines) + "\n"


def fit_loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)
