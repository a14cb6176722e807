"""Tree-guided row-operation primitives shared by the synthesis engines.

Each primitive walks a Steiner tree of the constraint graph, mutates the
working matrix through single row-XORs, and reports every operation to a
gate sink as a ``(control, target)`` pair, so the same code serves gate
recording and verification replay.

Two op-list builders are purely symbolic and are reused by the grid
synthesizer:

* :func:`parity_add_ops` adds the XOR of a source set into the tree root
  and restores every other node exactly, whatever its value.
* :func:`parity_fanout_ops` is its transpose: the root's value is added
  into every terminal, everything else restored.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .gf2 import GF2Matrix, solve_row_combination
from .topology import SteinerTree, TopologyGraph, steiner_tree_2approx

GateSink = Callable[[int, int], None]


def _rows(m) -> list[int]:
    return m.rows if isinstance(m, GF2Matrix) else m


def _apply(rows, emit: GateSink | None, control: int, target: int) -> None:
    rows[target] ^= rows[control]
    if emit is not None:
        emit(control, target)


def parity_add_ops(tree: SteinerTree, sources: Iterable[int]) -> list[tuple[int, int]]:
    """Ops adding the XOR of the source nodes' values into the tree root.

    The net linear map is exactly ``I + sum_{j in sources} E[root, j]``:
    every non-root node is restored bit-for-bit regardless of its value.
    Three passes: a pre-order pass adds each non-source node into its
    parent (so its later contribution cancels), a post-order pass funnels
    everything toward the root, and the non-root operations are replayed
    in reverse to undo the intermediate damage.  At most ``4 * tree.size``
    operations.
    """
    src = set(sources)
    ops = [
        (child, parent)
        for child, parent in tree.preorder()
        if child not in src
    ]
    ops.extend(tree.postorder())
    root = tree.root
    ops.extend((c, t) for c, t in reversed(ops) if t != root)
    return ops


def parity_fanout_ops(tree: SteinerTree, targets: Iterable[int]) -> list[tuple[int, int]]:
    """Ops adding the root's value into every target node; transpose of
    :func:`parity_add_ops`, so everything else is restored exactly."""
    return [(t, c) for c, t in reversed(parity_add_ops(tree, targets))]


def parity_fanout(
    m,
    g: TopologyGraph,
    source: int,
    targets: Iterable[int],
    emit: GateSink | None = None,
) -> None:
    """XOR-add row/qubit ``source`` into every target; all else unchanged.

    ``m`` may be a :class:`GF2Matrix` or a plain list of packed rows (so a
    classical state vector works too).  Emits at most 4x the Steiner tree
    size in gates.

    Raises:
        ValueError: if ``source`` is among the targets.
        DisconnectedGraphError: if the terminals cannot be connected.
    """
    targets = set(targets)
    if source in targets:
        raise ValueError("source cannot be a fanout target")
    if not targets:
        return
    rows = _rows(m)
    tree = steiner_tree_2approx(g, targets | {source}, root=source)
    for c, t in parity_fanout_ops(tree, targets):
        _apply(rows, emit, c, t)


def parity_add(
    m,
    tree: SteinerTree,
    sources: Iterable[int],
    emit: GateSink | None = None,
) -> None:
    """Apply :func:`parity_add_ops` for an already-built tree."""
    rows = _rows(m)
    for c, t in parity_add_ops(tree, sources):
        _apply(rows, emit, c, t)


def eliminate_column(
    m: GF2Matrix,
    g: TopologyGraph,
    pivot: int,
    emit: GateSink | None = None,
) -> None:
    """Reduce column ``pivot`` of ``m`` to e_pivot over the active subgraph.

    Builds a Steiner tree over the rows carrying a 1 in the column plus the
    pivot, then runs two post-order passes: the first propagates 1s upward
    so every tree node holds one (adding child to parent where the parent
    still reads 0), the second adds every node to its children, zeroing all
    non-pivot entries.
    """
    rows = m.rows
    support = {
        j for j in range(m.n) if g.is_active(j) and (rows[j] >> pivot) & 1
    }
    support.add(pivot)
    if support == {pivot} and (rows[pivot] >> pivot) & 1:
        return
    tree = steiner_tree_2approx(g, support, root=pivot)
    post = tree.postorder()
    for child, parent in post:
        if (rows[child] >> pivot) & 1 and not (rows[parent] >> pivot) & 1:
            _apply(rows, emit, child, parent)
    kids = tree.children()
    for node in [c for c, _ in post] + [pivot]:
        for child in kids[node]:
            _apply(rows, emit, node, child)


def eliminate_row(
    m: GF2Matrix,
    g: TopologyGraph,
    pivot: int,
    emit: GateSink | None = None,
    combination: set[int] | None = None,
) -> None:
    """Reduce row ``pivot`` of ``m`` to e_pivot^T (column already reduced).

    ``combination`` is the set of rows whose XOR equals row ``pivot`` plus
    e_pivot; it is solved from the inverse when not supplied.  A pre-order
    pass adds each non-member tree node into its parent, then a post-order
    pass adds every node into its parent, so member rows accumulate into
    the pivot exactly once and Steiner-point rows twice (cancelling).
    """
    if combination is None:
        combination = solve_row_combination(m, pivot)
    if not combination:
        return
    rows = m.rows
    tree = steiner_tree_2approx(g, combination | {pivot}, root=pivot)
    for child, parent in tree.preorder():
        if child not in combination:
            _apply(rows, emit, child, parent)
    for child, parent in tree.postorder():
        _apply(rows, emit, child, parent)
