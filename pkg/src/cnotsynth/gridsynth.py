"""Depth-oriented synthesis on grids with ancilla qubits.

The constraint graph is an m1 x m2 grid holding n data qubits in its first
columns, a work region in the middle, and accumulator cells for the
outputs in the last columns.  Synthesis runs in three stages:

1. For each input column, its values are copied across the work region
   (one chain per row, in parallel), and one parity network per output row
   adds the selected copies into that output's accumulator cell.  The
   copies are then undone.  After all input columns, the accumulators hold
   the full output vector while inputs and work cells are untouched.
2. The same routine runs mirrored with the inverse matrix, sourcing the
   accumulated outputs and adding into the input cells, which zeroes the
   inputs (x xor M^-1 M x = 0).
3. The outputs hop across the now-empty rows into the data cells.

Every building block is an exact GF(2) map that restores its intermediate
cells regardless of their values, so all ancillas end at zero bit-for-bit.

The standalone grid primitives :func:`copy_fanout` and
:func:`parity_add_grid` implement the d-dimensional chain copy and the
restoring parity accumulation with depth O(m1 + ... + md); grids with more
than two dimensions are synthesized by folding the trailing axes into one
serpentine axis, which preserves adjacency.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .circuit import CnotCircuit, CnotGate, implements_matrix
from .gf2 import GF2Matrix, inverse
from .steiner_ops import GateSink, parity_add_ops, parity_fanout_ops
from .topology import SteinerTree


@dataclass(frozen=True)
class GridLayout:
    """A d-dimensional grid with ``n`` data qubits placed column-major.

    Wire indices are row-major over the coordinates, matching the vertex
    numbering of :func:`cnotsynth.topology.grid_graph`.
    """

    dims: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(m) for m in self.dims))
        if not self.dims or any(m < 1 for m in self.dims):
            raise ValueError(f"bad grid dimensions {self.dims}")
        if not 1 <= self.n <= self.num_wires:
            raise ValueError(
                f"{self.n} data qubits do not fit a grid of {self.num_wires}"
            )

    @property
    def num_wires(self) -> int:
        return math.prod(self.dims)

    @property
    def ancillas(self) -> int:
        return self.num_wires - self.n

    def strides(self) -> list[int]:
        strides = [1] * len(self.dims)
        for a in range(len(self.dims) - 2, -1, -1):
            strides[a] = strides[a + 1] * self.dims[a + 1]
        return strides

    def wire(self, coord) -> int:
        coord = tuple(coord)
        if len(coord) != len(self.dims) or any(
            not 0 <= c < m for c, m in zip(coord, self.dims)
        ):
            raise ValueError(f"coordinate {coord} outside grid {self.dims}")
        return sum(c * s for c, s in zip(coord, self.strides()))

    def coord(self, wire: int) -> tuple[int, ...]:
        out = []
        for s in self.strides():
            out.append(wire // s)
            wire %= s
        return tuple(out)

    def data_wires(self) -> list[int]:
        """Wires holding the data qubits, in data order."""
        geo = _Geometry.of(self)
        return [geo.wire(geo.data_cell(t)) for t in range(self.n)]

    def region(self, coord) -> str:
        """Tag a cell as input / work / output / idle for synthesis."""
        geo = _Geometry.of(self)
        return geo.region(geo.cell_of_coord(tuple(coord)))


def _snake(dims: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Serpentine enumeration: consecutive entries are grid-adjacent."""
    if len(dims) == 1:
        return [(i,) for i in range(dims[0])]
    inner = _snake(dims[1:])
    out = []
    for i in range(dims[0]):
        block = inner if i % 2 == 0 else list(reversed(inner))
        out.extend((i,) + c for c in block)
    return out


class _Geometry:
    """Effective 2-D geometry of a layout: rows x (possibly folded) columns."""

    def __init__(self, layout: GridLayout):
        self.layout = layout
        self.n = layout.n
        self.m1 = layout.dims[0]
        tail = layout.dims[1:]
        self.m2 = math.prod(tail) if tail else 1
        self._tail_order = _snake(tail) if tail else [()]
        self._col_index = {c: i for i, c in enumerate(self._tail_order)}
        self.q = -(-self.n // self.m1)  # input/output column count
        self.s = self.m2 - 2 * self.q  # work column count

    @classmethod
    def of(cls, layout: GridLayout) -> "_Geometry":
        return cls(layout)

    def wire(self, cell: tuple[int, int]) -> int:
        r, c = cell
        return self.layout.wire((r,) + self._tail_order[c])

    def cell_of_coord(self, coord) -> tuple[int, int]:
        return coord[0], self._col_index[tuple(coord[1:]) or (0,)]

    def data_cell(self, t: int) -> tuple[int, int]:
        return t % self.m1, t // self.m1

    def out_cell(self, t: int) -> tuple[int, int]:
        return t % self.m1, self.m2 - self.q + t // self.m1

    def region(self, cell: tuple[int, int]) -> str:
        r, c = cell
        if c < self.q:
            return "input" if c * self.m1 + r < self.n else "idle"
        if c >= self.m2 - self.q:
            t = (c - (self.m2 - self.q)) * self.m1 + r
            return "output" if t < self.n else "idle"
        return "work"

    def check_synthesis_bounds(self) -> None:
        cells, n = self.m1 * self.m2, self.n
        if not 3 * n <= cells <= n * n:
            raise ValueError(
                f"layout violation: need 3n <= m1*m2 <= n^2, got "
                f"{cells} cells for n={n}"
            )
        if self.s < 1:
            raise ValueError(
                "layout violation: no work column left between the input "
                "and output regions"
            )


def _chain_tree(wires: list[int]) -> SteinerTree:
    parent = {wires[i]: wires[i - 1] for i in range(1, len(wires))}
    return SteinerTree(wires[0], parent, frozenset([wires[0], wires[-1]]))


def _path_add_ops(wires: list[int]) -> list[tuple[int, int]]:
    """Exact ops for wires[-1] ^= wires[0] along a path, rest restored."""
    if len(wires) == 2:
        return [(wires[0], wires[1])]
    return parity_fanout_ops(_chain_tree(wires), [wires[-1]])


def _column_tree(geo: _Geometry, col: int, rows, root_row: int) -> SteinerTree:
    """Path tree over a work-column segment, rooted at ``root_row``."""
    lo = min(min(rows), root_row)
    hi = max(max(rows), root_row)
    root = geo.wire((root_row, col))
    parent = {}
    for r in range(root_row - 1, lo - 1, -1):
        parent[geo.wire((r, col))] = geo.wire((r + 1, col))
    for r in range(root_row + 1, hi + 1):
        parent[geo.wire((r, col))] = geo.wire((r - 1, col))
    return SteinerTree(root, parent, frozenset(geo.wire((r, col)) for r in rows))


def _walk_east_ops(geo: _Geometry, row: int, col: int, dst_col: int):
    """Move the value at (row, col) into the zeroed cell (row, dst_col).

    Every crossed cell holds the same copy value as the start cell's
    native content, so each hop is two CNOTs that carry the payload one
    step while restoring the cell behind it; a three-CNOT finish drops the
    payload into the destination and repairs the last work cell.  The
    payload must be pure (the start cell's copy content already removed).
    """
    ops = []
    w = geo.wire
    pure = True
    for c in range(col, dst_col - 1):
        ops.append((w((row, c)), w((row, c + 1))))
        ops.append((w((row, c + 1)), w((row, c))))
        pure = not pure
    edge, helper, dst = (
        w((row, dst_col - 1)),
        w((row, dst_col - 2)),
        w((row, dst_col)),
    )
    if not pure:
        # One extra step against the neighbor purifies the payload.
        ops.append((helper, edge))
    ops += [(edge, dst), (dst, edge), (helper, edge)]
    return ops


def _spread_ops(geo: _Geometry, group, src_col: int, entry: int, chain_cols):
    """Copy a source column's values across the work region, one chain per
    row; the entry step crosses any cells in between with an exact
    restoring path addition."""
    ops = []
    for i in group:
        r = i % geo.m1
        step = 1 if entry > src_col else -1
        path = [geo.wire((r, c)) for c in range(src_col, entry + step, step)]
        ops.extend(_path_add_ops(path))
        prev = entry
        for c in chain_cols:
            ops.append((geo.wire((r, prev)), geo.wire((r, c))))
            prev = c
    return ops


def _accumulate_ops(
    w: GF2Matrix, geo: _Geometry, stage: int
) -> list[tuple[int, int]]:
    """Ops adding ``w`` applied to one cell block into the opposite block.

    Stage 1 reads the data cells and accumulates into the output cells;
    stage 2 reads the output cells back into the data cells, which zeroes
    them.  Per source column: spread it across the work region (one chain
    per row), then for each destination index run a parity network down
    one work column and move the resulting value out along its own row.
    Column networks of a round are mutually disjoint, and the row moves
    are mutually disjoint, so the schedule depth per round is O(m1 + m2).

    When the layout has a single input column, stage 1 moves each value
    with two-CNOT walks over the identical copies (no undo needed) and
    stage 2 finishes by consuming the copies right-to-left, which both
    delivers the outputs into the data cells and clears the work region.
    Multi-column layouts use exact restoring transfers throughout and a
    separate relocation pass.
    """
    n, m1, m2, q, s = geo.n, geo.m1, geo.m2, geo.q, geo.s
    work_lo, work_hi = q, m2 - q - 1
    fast = q == 1
    ops: list[tuple[int, int]] = []
    for ell in range(q):
        group = range(ell * m1, min(n, (ell + 1) * m1))
        if stage == 1:
            src_col, entry = ell, work_lo
            chain_cols = range(work_lo + 1, work_hi + 1)
        else:
            src_col, entry = m2 - q + ell, work_hi
            chain_cols = range(work_hi - 1, work_lo - 1, -1)
        spread = _spread_ops(geo, group, src_col, entry, chain_cols)
        ops.extend(spread)
        # Rounds of one parity network per work column.  Within a round
        # the networks live on disjoint columns and the movements on
        # disjoint rows, so emitting [all networks][all movements][all
        # undos] keeps every cross-tree cell conflict out of the greedy
        # schedule's critical path.  Reordering across trees is sound:
        # movements restore every crossed cell, so each network's undo
        # still sees exactly the state its forward pass left.
        for round_lo in range(0, n, s):
            sums_batch: list[tuple[int, int]] = []
            moves_batch: list[tuple[int, int]] = []
            undo_batch: list[tuple[int, int]] = []
            for t in range(round_lo, min(n, round_lo + s)):
                src_rows = [i % m1 for i in group if w.bit(t, i)]
                if not src_rows:
                    continue
                col = work_lo + t % s
                row = t % m1
                if stage == 1:
                    _, dst_col = geo.out_cell(t)
                else:
                    _, dst_col = geo.data_cell(t)
                native = ell * m1 + row  # source whose copy is the root cell
                absorb = native in group and w.bit(t, native)
                preclean: list[tuple[int, int]] = []
                if not absorb:
                    # Zero the root cell so the network leaves a pure value.
                    if s >= 2:
                        nbr = col + 1 if col < work_hi else col - 1
                        preclean = [(geo.wire((row, nbr)), geo.wire((row, col)))]
                    else:
                        preclean = _path_add_ops(
                            [geo.wire((row, c)) for c in _span(src_col, col)]
                        )
                sources = {
                    geo.wire((i % m1, col))
                    for i in group
                    if w.bit(t, i) and not (absorb and i == native)
                }
                tree = _column_tree(geo, col, src_rows, row)
                sum_ops = parity_add_ops(tree, sources)
                sums_batch.extend(preclean)
                sums_batch.extend(sum_ops)
                if stage == 1 and fast:
                    # The first hop (or the finish) restores the root to
                    # its copy value, so nothing needs undoing.
                    moves_batch.extend(_walk_east_ops(geo, row, col, dst_col))
                else:
                    # Exact restoring transfer, then undo the network so
                    # the root returns to its copy value.
                    moves_batch.extend(
                        _path_add_ops(
                            [geo.wire((row, c)) for c in _span(col, dst_col)]
                        )
                    )
                    undo_batch.extend(sum_ops)
                    undo_batch.extend(reversed(preclean))
            ops.extend(sums_batch)
            ops.extend(moves_batch)
            ops.extend(undo_batch)
        if stage == 2 and fast:
            # Consume the copies: deliver each output into its data cell,
            # then erase the whole row right-to-left against its left
            # neighbor; this doubles as the relocation pass.
            for i in group:
                r = i % m1
                ops.append((geo.wire((r, work_lo)), geo.wire((r, ell))))
                for c in range(m2 - 1, work_lo - 1, -1):
                    ops.append((geo.wire((r, c - 1)), geo.wire((r, c))))
        else:
            ops.extend(reversed(spread))
    return ops


def _span(a: int, b: int) -> range:
    return range(a, b + 1) if b >= a else range(a, b - 1, -1)


def _relocate_ops(geo: _Geometry) -> list[tuple[int, int]]:
    """Hop every output value from its accumulator into its data cell.

    After stage 2 the crossed cells all hold zero, so each hop is two
    CNOTs: copy into the empty neighbor, then erase behind.  Columns move
    in ascending order so no hop ever crosses an already-landed value.
    """
    ops = []
    for ell in range(geo.q):
        for t in range(ell * geo.m1, min(geo.n, (ell + 1) * geo.m1)):
            r = t % geo.m1
            for c in range(geo.m2 - geo.q + ell, ell, -1):
                here, left = geo.wire((r, c)), geo.wire((r, c - 1))
                ops.append((here, left))
                ops.append((left, here))
    return ops


def synthesize_grid_depth(
    m: GF2Matrix, layout: GridLayout, check: bool = True
) -> CnotCircuit:
    """Synthesize ``m`` on the layout's grid with all ancillas restored.

    Returns a circuit over all grid wires whose data wires (see
    :meth:`GridLayout.data_wires`) carry ``m`` applied to the input while
    every other wire returns to zero.

    Raises:
        SingularMatrixError: if ``m`` is not invertible.
        ValueError: on a layout violation (cell count outside [3n, n^2],
            no work column, or a dimension mismatch).
    """
    if layout.n != m.n:
        raise ValueError(f"layout carries {layout.n} data qubits, matrix {m.n}")
    geo = _Geometry.of(layout)
    geo.check_synthesis_bounds()
    m_inv = inverse(m)
    ops = _accumulate_ops(m, geo, stage=1)
    ops += _accumulate_ops(m_inv, geo, stage=2)
    if geo.q > 1:
        ops += _relocate_ops(geo)
    circuit = CnotCircuit(layout.num_wires, (CnotGate(c, t) for c, t in ops))
    if check:
        assert implements_matrix(
            circuit, m, layout.data_wires()
        ), "grid synthesis failed verification"
    return circuit


# -- standalone grid primitives --------------------------------------------


def _check_coords(layout: GridLayout, coords) -> set[tuple[int, ...]]:
    out = set()
    for c in coords:
        c = tuple(c)
        layout.wire(c)  # range check
        out.add(c)
    return out


def copy_fanout(
    layout: GridLayout, source, region, emit: GateSink
) -> None:
    """Copy the source cell's value into a box of zeroed cells.

    The region plus the source must form a sub-box of the grid.  The
    source value is first moved to the nearest box corner if necessary
    (over zeroed cells, two CNOTs per step), then chain-copied dimension
    by dimension, giving depth O(m1 + ... + md).

    Raises:
        ValueError: if the region overlaps the source or is not a sub-box.
    """
    src = tuple(source)
    cells = _check_coords(layout, region)
    layout.wire(src)
    if src in cells:
        raise ValueError("region overlaps the source cell")
    if not cells:
        return
    pts = cells | {src}
    axes = range(len(layout.dims))
    lo = [min(p[a] for p in pts) for a in axes]
    hi = [max(p[a] for p in pts) for a in axes]
    ranges = [range(lo[a], hi[a] + 1) for a in axes]
    if set(itertools.product(*ranges)) != pts:
        raise ValueError("region plus source is not a sub-box")

    corner = tuple(
        lo[a] if src[a] - lo[a] <= hi[a] - src[a] else hi[a] for a in axes
    )
    cur = list(src)
    for a in axes:
        while cur[a] != corner[a]:
            nxt = list(cur)
            nxt[a] += 1 if corner[a] > cur[a] else -1
            emit(layout.wire(cur), layout.wire(nxt))
            emit(layout.wire(nxt), layout.wire(cur))
            cur = nxt
    for a in axes:
        step = 1 if corner[a] == lo[a] else -1
        far = hi[a] if step == 1 else lo[a]
        head = [ranges[b] for b in range(a)]
        tail = corner[a + 1 :]
        for prefix in itertools.product(*head):
            prev = corner[a]
            for k in range(corner[a] + step, far + step, step):
                emit(
                    layout.wire(prefix + (prev,) + tail),
                    layout.wire(prefix + (k,) + tail),
                )
                prev = k


def parity_add_grid(
    layout: GridLayout, s_set, y, emit: GateSink
) -> None:
    """Add the XOR of the marked cells into cell ``y``; all else restored.

    Builds the comb-shaped spanning tree of the bounding box rooted at
    ``y`` (teeth along the highest axis feeding lower-axis spines) and
    runs the restoring parity accumulation over it, giving depth
    O(m1 + ... + md) wherever ``y`` sits.

    Raises:
        ValueError: if ``y`` is in the source set.
    """
    yy = tuple(y)
    layout.wire(yy)
    cells = _check_coords(layout, s_set)
    if yy in cells:
        raise ValueError("the accumulator cell cannot be a source")
    if not cells:
        return
    pts = cells | {yy}
    axes = range(len(layout.dims))
    ranges = [
        range(min(p[a] for p in pts), max(p[a] for p in pts) + 1)
        for a in axes
    ]
    parent = {}
    for cell in itertools.product(*ranges):
        if cell == yy:
            continue
        a = max(ax for ax in axes if cell[ax] != yy[ax])
        toward = list(cell)
        toward[a] += 1 if yy[a] > cell[a] else -1
        parent[layout.wire(cell)] = layout.wire(tuple(toward))
    tree = SteinerTree(
        layout.wire(yy), parent, frozenset(layout.wire(c) for c in cells)
    )
    for c, t in parity_add_ops(tree, tree.terminals):
        emit(c, t)
