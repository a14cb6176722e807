"""CNOT circuit values: simulation, matrix extraction, depth, equivalence.

A circuit is an ordered gate list over a fixed number of wires.  Its linear
action is the GF(2) matrix whose column ``j`` is the circuit applied to the
basis vector e_j.  Depth is the length of the canonical greedy layering:
every gate goes into the earliest layer after the last layer that touched
either of its wires.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf2 import GF2Matrix


@dataclass(frozen=True)
class CnotGate:
    """A CNOT with ``control`` and ``target`` wire indices."""

    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("control and target must differ")
        if self.control < 0 or self.target < 0:
            raise ValueError("wire indices must be non-negative")


class CnotCircuit:
    """Immutable ordered CNOT gate list on ``num_qubits`` wires."""

    __slots__ = ("num_qubits", "gates")

    def __init__(self, num_qubits: int, gates: Iterable[CnotGate] = ()):
        gates = tuple(gates)
        if num_qubits < 1:
            raise ValueError("need at least one qubit")
        for g in gates:
            if g.control >= num_qubits or g.target >= num_qubits:
                raise ValueError(f"gate {g} out of range for {num_qubits} qubits")
        self.num_qubits = num_qubits
        self.gates = gates

    @property
    def size(self) -> int:
        return len(self.gates)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CnotCircuit)
            and self.num_qubits == other.num_qubits
            and self.gates == other.gates
        )

    def __repr__(self) -> str:
        return f"CnotCircuit({self.num_qubits}, {len(self.gates)} gates)"

    def reversed(self) -> "CnotCircuit":
        """Same gates in reverse order; the inverse circuit, as CNOT is an involution."""
        return CnotCircuit(self.num_qubits, reversed(self.gates))


class GateRecorder:
    """Callable gate sink that collects ``(control, target)`` pairs."""

    def __init__(self):
        self.ops: list[tuple[int, int]] = []

    def __call__(self, control: int, target: int) -> None:
        self.ops.append((control, target))

    def circuit(self, num_qubits: int) -> CnotCircuit:
        return CnotCircuit(num_qubits, (CnotGate(c, t) for c, t in self.ops))


def _run_packed(gates, words: list[int]) -> list[int]:
    """Apply gates to a packed state: words[w] holds one bit per parallel run."""
    for g in gates:
        words[g.target] ^= words[g.control]
    return words


def simulate(circuit: CnotCircuit, x: Sequence[int]) -> list[int]:
    """Apply the circuit to a classical 0/1 vector, gate by gate.

    Raises:
        ValueError: if ``x`` does not have one bit per wire.
    """
    if len(x) != circuit.num_qubits:
        raise ValueError(
            f"input length {len(x)} != qubit count {circuit.num_qubits}"
        )
    state = [int(b) & 1 for b in x]
    return _run_packed(circuit.gates, state)


def to_matrix(circuit: CnotCircuit) -> GF2Matrix:
    """Linear action of the circuit; column j equals the circuit applied to e_j.

    All basis vectors are simulated at once by packing one simulation per
    bit position, so the cost is one XOR per gate.
    """
    n = circuit.num_qubits
    words = _run_packed(circuit.gates, [1 << w for w in range(n)])
    return GF2Matrix(n, words)


def depth(circuit: CnotCircuit) -> int:
    """Number of layers of the greedy as-soon-as-possible schedule."""
    last = [0] * circuit.num_qubits
    d = 0
    for g in circuit.gates:
        layer = max(last[g.control], last[g.target]) + 1
        last[g.control] = last[g.target] = layer
        if layer > d:
            d = layer
    return d


def layering(circuit: CnotCircuit) -> list[list[int]]:
    """Canonical layering: per-layer gate indices under the greedy schedule.

    The result satisfies the two canonical-form properties: gates within a
    layer act on pairwise disjoint wires, and every gate in layer i >= 2
    shares a wire with some gate in layer i - 1.
    """
    last = [0] * circuit.num_qubits
    layers: list[list[int]] = []
    for idx, g in enumerate(circuit.gates):
        layer = max(last[g.control], last[g.target]) + 1
        last[g.control] = last[g.target] = layer
        while len(layers) < layer:
            layers.append([])
        layers[layer - 1].append(idx)
    return layers


def implements_matrix(
    circuit: CnotCircuit,
    m: GF2Matrix,
    data_wires: Sequence[int] | None = None,
) -> bool:
    """Check that ``circuit`` implements ``m`` on the given data wires.

    The circuit may use extra wires as ancillas.  For every basis input e_j
    placed on the data wires (ancillas zero), the data wires must carry
    column j of ``m`` afterwards and every ancilla must be restored to 0,
    which is exact over GF(2).

    Raises:
        ValueError: if the wire map is invalid.
    """
    n = m.n
    if data_wires is None:
        data_wires = range(n)
    data_wires = list(data_wires)
    if len(data_wires) != n:
        raise ValueError(f"need {n} data wires, got {len(data_wires)}")
    if len(set(data_wires)) != n or any(
        w < 0 or w >= circuit.num_qubits for w in data_wires
    ):
        raise ValueError("data wires must be distinct circuit wires")
    words = [0] * circuit.num_qubits
    for j, w in enumerate(data_wires):
        words[w] = 1 << j
    _run_packed(circuit.gates, words)
    data_set = set(data_wires)
    for i, w in enumerate(data_wires):
        if words[w] != m.rows[i]:
            return False
    return all(words[w] == 0 for w in range(circuit.num_qubits) if w not in data_set)


def check_equivalent(
    c1: CnotCircuit,
    c2: CnotCircuit,
    data_wires: Sequence[int] | None = None,
) -> bool:
    """True iff ``c2`` implements the same map as ``c1``.

    ``c2`` may use more wires than ``c1``; ``data_wires`` names the wires of
    ``c2`` carrying the inputs and outputs of ``c1`` (defaults to the first
    ``c1.num_qubits`` wires).  Ancillas must start and end at 0.
    """
    return implements_matrix(c2, to_matrix(c1), data_wires)


def expand_swap(a: int, b: int) -> CnotCircuit:
    """Three CNOTs implementing a SWAP of wires ``a`` and ``b``."""
    if a == b:
        raise ValueError("swap wires must differ")
    return CnotCircuit(
        max(a, b) + 1,
        [CnotGate(a, b), CnotGate(b, a), CnotGate(a, b)],
    )


def parse_circuit_text(text: str) -> CnotCircuit:
    """Parse the circuit text format: "n <qubits>" then "CNOT <c> <t>" lines."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty circuit text")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n":
        raise ValueError(f"header must be 'n <num_qubits>', got {lines[0]!r}")
    num_qubits = int(head[1])
    gates = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3 or parts[0] != "CNOT":
            raise ValueError(f"bad gate line: {ln!r}")
        gates.append(CnotGate(int(parts[1]), int(parts[2])))
    return CnotCircuit(num_qubits, gates)


def format_circuit_text(circuit: CnotCircuit) -> str:
    lines = [f"n {circuit.num_qubits}"]
    lines.extend(f"CNOT {g.control} {g.target}" for g in circuit.gates)
    return "\n".join(lines) + "\n"
