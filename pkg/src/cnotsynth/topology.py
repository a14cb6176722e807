"""Constraint graphs for routed synthesis.

Connectivity queries, cut vertices, deterministic shortest paths, the
metric-closure 2-approximate Steiner tree, device presets, and edge-list
file I/O.  All tie-breaking is by lowest vertex index so synthesis output
is reproducible byte-for-byte.
"""

from __future__ import annotations

import itertools
from importlib import resources

from .circuit import CnotCircuit


class DisconnectedGraphError(ValueError):
    """Raised when an operation needs a connected (sub)graph."""


class EmptyGraphError(ValueError):
    """Raised when an operation needs at least one active vertex."""


class TopologyGraph:
    """Undirected constraint graph with an optional vertex-deletion mask.

    The mask supports the synthesis loop that peels one vertex per round;
    deleted vertices are skipped by every query.  A graph owned by a
    synthesis run is mutated through :meth:`delete_vertex`; concurrent runs
    must use separate copies.
    """

    __slots__ = ("num_vertices", "adj", "nbr_sets", "_active", "_num_active")

    def __init__(self, num_vertices: int, edges):
        if num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        adj: list[list[int]] = [[] for _ in range(num_vertices)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        self.num_vertices = num_vertices
        self.adj = [sorted(nbrs) for nbrs in adj]
        self.nbr_sets = [set(nbrs) for nbrs in adj]
        self._active = [True] * num_vertices
        self._num_active = num_vertices

    def copy(self) -> "TopologyGraph":
        out = TopologyGraph.__new__(TopologyGraph)
        out.num_vertices = self.num_vertices
        out.adj = self.adj
        out.nbr_sets = self.nbr_sets
        out._active = list(self._active)
        out._num_active = self._num_active
        return out

    # -- active-subgraph queries -------------------------------------------

    @property
    def num_active(self) -> int:
        return self._num_active

    def is_active(self, v: int) -> bool:
        return self._active[v]

    def active_vertices(self) -> list[int]:
        return [v for v in range(self.num_vertices) if self._active[v]]

    def neighbors(self, v: int) -> list[int]:
        if not self._active[v]:
            return []
        if self._num_active == self.num_vertices:
            return self.adj[v]
        return [u for u in self.adj[v] if self._active[u]]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.nbr_sets[u]

    def edges(self) -> list[tuple[int, int]]:
        return [
            (u, v)
            for u in self.active_vertices()
            for v in self.neighbors(u)
            if u < v
        ]

    def delete_vertex(self, v: int) -> None:
        if not self._active[v]:
            raise ValueError(f"vertex {v} already deleted")
        self._active[v] = False
        self._num_active -= 1

    def is_connected(self) -> bool:
        actives = self.active_vertices()
        if not actives:
            return False
        seen = {actives[0]}
        stack = [actives[0]]
        while stack:
            u = stack.pop()
            for w in self.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(actives)

    def min_degree(self) -> int:
        return min(self.degree(v) for v in self.active_vertices())

    def max_degree(self) -> int:
        return max(self.degree(v) for v in self.active_vertices())


class SteinerTree:
    """Rooted tree over a terminal set, with edges taken from the host graph.

    ``parent`` maps every non-root tree node to its parent.  Children are
    always traversed in ascending index order, and both traversals are
    iterative because grid synthesis builds trees thousands of nodes deep.
    """

    __slots__ = ("root", "parent", "terminals", "_children")

    def __init__(self, root: int, parent: dict[int, int], terminals):
        self.root = root
        self.parent = dict(parent)
        self.terminals = frozenset(terminals)
        self._children = None

    def nodes(self) -> set[int]:
        return {self.root} | set(self.parent)

    @property
    def size(self) -> int:
        return 1 + len(self.parent)

    def children(self) -> dict[int, list[int]]:
        if self._children is None:
            kids: dict[int, list[int]] = {v: [] for v in self.nodes()}
            for child, par in self.parent.items():
                kids[par].append(child)
            for v in kids:
                kids[v].sort()
            self._children = kids
        return self._children

    def preorder(self) -> list[tuple[int, int]]:
        """(child, parent) pairs, parents before children; root excluded."""
        kids = self.children()
        out = []
        stack = list(reversed(kids[self.root]))
        while stack:
            v = stack.pop()
            out.append((v, self.parent[v]))
            stack.extend(reversed(kids[v]))
        return out

    def postorder(self) -> list[tuple[int, int]]:
        """(child, parent) pairs, children before parents; root excluded."""
        kids = self.children()
        out = []
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            v, expanded = stack.pop()
            if expanded:
                if v != self.root:
                    out.append((v, self.parent[v]))
            else:
                stack.append((v, True))
                stack.extend((c, False) for c in reversed(kids[v]))
        return out


def _bfs(g: TopologyGraph, start: int):
    """BFS over the active subgraph; returns (dist, parent) arrays.

    Neighbors are scanned in ascending order, so parents (and therefore
    reconstructed paths) break ties toward lower indices.
    """
    dist = [-1] * g.num_vertices
    par = [-1] * g.num_vertices
    dist[start] = 0
    queue = [start]
    for u in queue:
        du = dist[u] + 1
        for w in g.neighbors(u):
            if dist[w] < 0:
                dist[w] = du
                par[w] = u
                queue.append(w)
    return dist, par


def shortest_path(g: TopologyGraph, u: int, v: int) -> list[int]:
    """Minimum-edge-count path from ``u`` to ``v`` in the active subgraph.

    Raises:
        DisconnectedGraphError: if no path exists.
    """
    if not (g.is_active(u) and g.is_active(v)):
        raise DisconnectedGraphError(f"vertex {u} or {v} is not active")
    if u == v:
        return [u]
    if g.has_edge(u, v):
        return [u, v]
    dist, par = _bfs(g, u)
    if dist[v] < 0:
        raise DisconnectedGraphError(f"no path between {u} and {v}")
    path = [v]
    while path[-1] != u:
        path.append(par[path[-1]])
    path.reverse()
    return path


def articulation_points(g: TopologyGraph) -> set[int]:
    """Cut vertices of the active subgraph (iterative lowpoint search)."""
    actives = g.active_vertices()
    disc = {v: -1 for v in actives}
    low = {}
    arts: set[int] = set()
    timer = 0
    for start in actives:
        if disc[start] >= 0:
            continue
        root_children = 0
        stack = [(start, -1, iter(g.neighbors(start)))]
        disc[start] = low[start] = timer
        timer += 1
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == start:
                        root_children += 1
                    stack.append((w, v, iter(g.neighbors(w))))
                    advanced = True
                    break
                if w != parent and disc[w] < low[v]:
                    low[v] = disc[w]
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if p != start and low[v] >= disc[p]:
                        arts.add(p)
        if root_children > 1:
            arts.add(start)
    return arts


def non_cut_vertices(g: TopologyGraph) -> list[int]:
    """Active vertices whose removal keeps the remainder connected."""
    actives = g.active_vertices()
    if not actives:
        raise EmptyGraphError("no active vertices")
    if len(actives) == 1:
        return actives
    arts = articulation_points(g)
    return [v for v in actives if v not in arts]


def find_non_cut_vertex(g: TopologyGraph) -> int:
    """Lowest-index active vertex that is not a cut vertex."""
    return non_cut_vertices(g)[0]


def steiner_tree_2approx(
    g: TopologyGraph, terminals, root: int | None = None
) -> SteinerTree:
    """Metric-closure Steiner tree heuristic, within 2x of the optimum.

    Pairwise BFS distances between terminals feed a deterministic Prim
    sweep; chosen connecting paths are expanded back into graph edges and
    the union is pruned to a tree in which every leaf is a terminal.

    Raises:
        DisconnectedGraphError: if the terminals are not mutually reachable.
    """
    terms = sorted(set(terminals))
    if not terms:
        raise ValueError("terminal set must be nonempty")
    for t in terms:
        if not g.is_active(t):
            raise ValueError(f"terminal {t} is not active")
    if root is None:
        root = terms[0]
    elif root not in terms:
        terms = sorted(set(terms) | {root})
    if len(terms) == 1:
        return SteinerTree(root, {}, frozenset(terms))

    # Dense fast path: every terminal adjacent to the root gives a star,
    # which is optimal outright.
    nbr = g.nbr_sets[root]
    if all(t == root or t in nbr for t in terms):
        return SteinerTree(
            root, {t: root for t in terms if t != root}, frozenset(terms)
        )

    dist = {}
    par = {}
    for t in terms:
        dist[t], par[t] = _bfs(g, t)

    in_tree = {root}
    tree_edges: set[tuple[int, int]] = set()
    tree_nodes = {root}
    remaining = [t for t in terms if t != root]
    while remaining:
        best = None
        for t in remaining:
            for anchor in sorted(in_tree):
                d = dist[anchor][t]
                if d < 0:
                    raise DisconnectedGraphError(
                        f"terminal {t} unreachable from {anchor}"
                    )
                cand = (d, t, anchor)
                if best is None or cand < best:
                    best = cand
        _, t, anchor = best
        # Walk the BFS parent chain of ``anchor`` from t back to anchor.
        path = [t]
        while path[-1] != anchor:
            path.append(par[anchor][path[-1]])
        for a, b in itertools.pairwise(path):
            tree_edges.add((min(a, b), max(a, b)))
            tree_nodes.update((a, b))
        in_tree.add(t)
        remaining.remove(t)

    # The union of paths may contain cycles; extract a BFS tree and prune
    # non-terminal leaf branches.
    nbrs_in_union: dict[int, list[int]] = {v: [] for v in tree_nodes}
    for a, b in tree_edges:
        nbrs_in_union[a].append(b)
        nbrs_in_union[b].append(a)
    parent = {}
    seen = {root}
    queue = [root]
    for u in queue:
        for w in sorted(nbrs_in_union[u]):
            if w not in seen:
                seen.add(w)
                parent[w] = u
                queue.append(w)
    term_set = set(terms)
    changed = True
    while changed:
        changed = False
        child_count = {v: 0 for v in seen}
        for child, p in parent.items():
            child_count[p] += 1
        for v in list(parent):
            if child_count[v] == 0 and v not in term_set:
                del parent[v]
                seen.discard(v)
                changed = True
    return SteinerTree(root, parent, frozenset(terms))


def validate_circuit(g: TopologyGraph, circuit: CnotCircuit) -> bool:
    """True iff every gate acts on an edge of ``g``.

    Raises:
        ValueError: if qubit and vertex counts differ.
    """
    if circuit.num_qubits != g.num_vertices:
        raise ValueError(
            f"circuit has {circuit.num_qubits} qubits, graph has "
            f"{g.num_vertices} vertices"
        )
    return all(g.has_edge(gate.control, gate.target) for gate in circuit.gates)


# -- presets and file formats ----------------------------------------------


def path_graph(n: int) -> TopologyGraph:
    return TopologyGraph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> TopologyGraph:
    return TopologyGraph(n, itertools.combinations(range(n), 2))


def grid_graph(*dims: int) -> TopologyGraph:
    """Grid over d dimensions; vertex index is row-major over coordinates."""
    if not dims or any(m < 1 for m in dims):
        raise ValueError(f"bad grid dimensions {dims}")
    strides = [1] * len(dims)
    for a in range(len(dims) - 2, -1, -1):
        strides[a] = strides[a + 1] * dims[a + 1]
    n = strides[0] * dims[0]
    edges = []
    for coord in itertools.product(*(range(m) for m in dims)):
        idx = sum(c * s for c, s in zip(coord, strides))
        for a, m in enumerate(dims):
            if coord[a] + 1 < m:
                edges.append((idx, idx + strides[a]))
    return TopologyGraph(n, edges)


def _load_data_graph(name: str) -> TopologyGraph:
    text = resources.files("cnotsynth.data").joinpath(f"{name}.edges").read_text()
    return read_edge_list(text)


_FIXED_PRESETS = {
    "ibmq20": lambda: _load_data_graph("ibmq20"),
    "t20": lambda: _load_data_graph("t20"),
    "athens5": lambda: path_graph(5),
    "yorktown5": lambda: TopologyGraph(
        5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]
    ),
}


def preset_graph(name: str) -> TopologyGraph:
    """Build a named preset: path(n), grid(m1,..,md), complete(n), or a device.

    Raises:
        ValueError: for unknown presets or bad dimensions.
    """
    name = name.strip()
    if name in _FIXED_PRESETS:
        return _FIXED_PRESETS[name]()
    if "(" in name and name.endswith(")"):
        kind, _, arg_text = name[:-1].partition("(")
        try:
            args = [int(a) for a in arg_text.split(",")]
        except ValueError:
            raise ValueError(f"bad preset arguments in {name!r}")
        if kind == "path" and len(args) == 1:
            if args[0] < 1:
                raise ValueError(f"bad path length {args[0]}")
            return path_graph(args[0])
        if kind == "complete" and len(args) == 1:
            if args[0] < 1:
                raise ValueError(f"bad complete-graph size {args[0]}")
            return complete_graph(args[0])
        if kind == "grid":
            return grid_graph(*args)
    raise ValueError(f"unknown preset {name!r}")


def read_edge_list(text: str) -> TopologyGraph:
    """Parse edge-list text: a "n m" header then m lines "u v" (0-based)."""
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise ValueError("empty edge-list text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"header must be 'n m', got {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) != m + 1:
        raise ValueError(f"expected {m} edges, got {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return TopologyGraph(n, edges)


def write_edge_list(g: TopologyGraph) -> str:
    edges = g.edges()
    lines = [f"{g.num_vertices} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def load_graph(spec: str) -> TopologyGraph:
    """Resolve a --graph argument: "preset:<name>" or an edge-list path."""
    if spec.startswith("preset:"):
        return preset_graph(spec[len("preset:"):])
    with open(spec, encoding="utf-8") as fh:
        return read_edge_list(fh.read())
