"""CNOT circuit synthesis and optimization under connectivity constraints.

Size optimization on arbitrary connected graphs (row-and-column peeling,
Gray-code block elimination), depth optimization on grids with ancillas,
exhaustive small-instance oracles, and a reproducible benchmark harness.
"""

from .circuit import (
    CnotCircuit,
    CnotGate,
    GateRecorder,
    check_equivalent,
    depth,
    expand_swap,
    format_circuit_text,
    implements_matrix,
    layering,
    parse_circuit_text,
    simulate,
    to_matrix,
)
from .gf2 import (
    GF2Matrix,
    SingularMatrixError,
    format_matrix_text,
    inverse,
    is_invertible,
    multiply,
    parse_matrix_text,
    random_invertible,
    row_add,
    solve_row_combination,
    transpose,
)
from .gridsynth import (
    GridLayout,
    copy_fanout,
    parity_add_grid,
    synthesize_grid_depth,
)
from .oracle import GapStats, optimal_size_table, optimality_gap
from .rowcol import synthesize_rowcol
from .sbe import SbeParams, choose_params, eliminate_block, synthesize_sbe
from .steiner_ops import eliminate_column, eliminate_row, parity_fanout
from .topology import (
    DisconnectedGraphError,
    SteinerTree,
    TopologyGraph,
    find_non_cut_vertex,
    grid_graph,
    preset_graph,
    shortest_path,
    steiner_tree_2approx,
    validate_circuit,
)

__version__ = "0.1.0"

__all__ = [
    "CnotCircuit",
    "CnotGate",
    "DisconnectedGraphError",
    "GF2Matrix",
    "GapStats",
    "GateRecorder",
    "GridLayout",
    "SbeParams",
    "SingularMatrixError",
    "SteinerTree",
    "TopologyGraph",
    "check_equivalent",
    "choose_params",
    "copy_fanout",
    "depth",
    "eliminate_block",
    "eliminate_column",
    "eliminate_row",
    "expand_swap",
    "find_non_cut_vertex",
    "format_circuit_text",
    "format_matrix_text",
    "grid_graph",
    "implements_matrix",
    "inverse",
    "is_invertible",
    "layering",
    "multiply",
    "optimal_size_table",
    "optimality_gap",
    "parity_add_grid",
    "parity_fanout",
    "parse_circuit_text",
    "parse_matrix_text",
    "preset_graph",
    "random_invertible",
    "row_add",
    "shortest_path",
    "simulate",
    "solve_row_combination",
    "steiner_tree_2approx",
    "synthesize_grid_depth",
    "synthesize_rowcol",
    "synthesize_sbe",
    "to_matrix",
    "transpose",
    "validate_circuit",
]
