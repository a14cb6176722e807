"""Exhaustive ground truth for tiny instances.

Breadth-first search from the identity over all constrained row additions
enumerates every invertible matrix reachable on the graph together with
its minimum constrained CNOT count.  On a connected graph the reachable
set is all of GL(n, 2), whose size ``prod_{i<n} (2^n - 2^i)`` doubles as a
self-check.  Feasible up to n = 4 (20160 states).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .circuit import CnotCircuit
from .gf2 import GF2Matrix, random_invertible
from .topology import TopologyGraph

MAX_ORACLE_DIM = 4


def matrix_key(m: GF2Matrix) -> int:
    """Pack the rows into a single integer key (row i in bits i*n..)."""
    key = 0
    for i, r in enumerate(m.rows):
        key |= r << (i * m.n)
    return key


def key_to_matrix(key: int, n: int) -> GF2Matrix:
    mask = (1 << n) - 1
    return GF2Matrix(n, [(key >> (i * n)) & mask for i in range(n)])


def gl2_order(n: int) -> int:
    """|GL(n, 2)| = prod_{i<n} (2^n - 2^i)."""
    out = 1
    for i in range(n):
        out *= (1 << n) - (1 << i)
    return out


def optimal_size_table(g: TopologyGraph, n: int) -> dict[int, int]:
    """Map matrix key -> minimum constrained CNOT count, for every matrix.

    Raises:
        ValueError: if ``n`` exceeds the tractable limit or does not match
            the graph.
    """
    if n > MAX_ORACLE_DIM:
        raise ValueError(f"oracle supports n <= {MAX_ORACLE_DIM}, got {n}")
    if g.num_vertices != n:
        raise ValueError(f"graph has {g.num_vertices} vertices, expected {n}")
    moves = []
    for u, v in g.edges():
        moves.append((u, v))
        moves.append((v, u))
    start = matrix_key(GF2Matrix.identity(n))
    dist = {start: 0}
    frontier = [start]
    mask = (1 << n) - 1
    while frontier:
        nxt = []
        for key in frontier:
            d = dist[key] + 1
            rows = [(key >> (i * n)) & mask for i in range(n)]
            for c, t in moves:
                new_row = rows[t] ^ rows[c]
                new_key = key ^ ((rows[t] ^ new_row) << (t * n))
                if new_key not in dist:
                    dist[new_key] = d
                    nxt.append(new_key)
        frontier = nxt
    return dist


@dataclass(frozen=True)
class GapStats:
    """Synthesized-minus-optimal size statistics over sampled matrices."""

    samples: int
    mean_gap: float
    max_gap: int
    histogram: dict[int, int]


def optimality_gap(
    g: TopologyGraph,
    synthesize: Callable[[GF2Matrix, TopologyGraph], CnotCircuit],
    samples: int,
    rng: random.Random,
    table: dict[int, int] | None = None,
) -> GapStats:
    """Sample matrices and compare synthesized sizes against the oracle.

    The synthesized size can never beat the breadth-first minimum; a
    negative gap raises immediately.
    """
    n = g.num_vertices
    if table is None:
        table = optimal_size_table(g, n)
    histogram: dict[int, int] = {}
    total = 0
    worst = 0
    for _ in range(samples):
        m = random_invertible(n, rng)
        achieved = synthesize(m, g.copy()).size
        best = table[matrix_key(m)]
        gap = achieved - best
        if gap < 0:
            raise AssertionError(
                f"synthesizer beat the exhaustive oracle ({achieved} < {best})"
            )
        histogram[gap] = histogram.get(gap, 0) + 1
        total += gap
        worst = max(worst, gap)
    return GapStats(
        samples=samples,
        mean_gap=total / samples if samples else 0.0,
        max_gap=worst,
        histogram=histogram,
    )
