"""Layered two-qubit-gate circuits with geometry annotations."""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from shallowscope.circuit.gates import FIXED_GATE_SET, fixed_set_gate, haar_gate, is_unitary
from shallowscope.exceptions import CircuitError, DimensionError
from shallowscope.qcore import PureState, apply_local, check_qubit_count

logger = logging.getLogger(__name__)

GEOMETRY_KINDS = ("general", "chain", "square_lattice")
GATE_SETS = ("haar", "fixed")

Coordinate = Tuple[int, int]


@dataclass(frozen=True)
class Geometry:
    """Connectivity rule for gates.

    ``coordinates[q]`` is the lattice site of qubit ``q`` and is only used by
    the square lattice.
    """

    kind: str = "general"
    coordinates: Optional[Tuple[Coordinate, ...]] = None

    def __post_init__(self):
        if self.kind not in GEOMETRY_KINDS:
            raise CircuitError(f"unknown geometry {self.kind!r}; expected one of {GEOMETRY_KINDS}")
        if self.coordinates is None:
            return
        if self.kind != "square_lattice":
            raise CircuitError(f"{self.kind} geometry does not take coordinates")
        coords = tuple((int(r), int(c)) for r, c in self.coordinates)
        if len(set(coords)) != len(coords):
            raise CircuitError("square_lattice coordinates contain duplicates")
        object.__setattr__(self, "coordinates", coords)

    @classmethod
    def general(cls) -> "Geometry":
        return cls("general")

    @classmethod
    def chain(cls) -> "Geometry":
        return cls("chain")

    @classmethod
    def square_lattice(cls, coordinates: Sequence[Coordinate]) -> "Geometry":
        return cls("square_lattice", tuple(coordinates))

    @classmethod
    def grid(cls, n_qubits: int, columns: Optional[int] = None) -> "Geometry":
        """Row-major square-lattice embedding of ``n_qubits`` sites."""
        columns = columns or math.ceil(math.sqrt(n_qubits))
        return cls.square_lattice([divmod(q, columns) for q in range(n_qubits)])

    def adjacent(self, a: int, b: int) -> bool:
        if a == b:
            return False
        if self.kind == "general":
            return True
        if self.kind == "chain":
            return abs(a - b) == 1
        if self.coordinates is None or max(a, b) >= len(self.coordinates):
            return False
        (ra, ca), (rb, cb) = self.coordinates[a], self.coordinates[b]
        return abs(ra - rb) + abs(ca - cb) == 1

    def edges(self, n_qubits: int) -> List[Tuple[int, int]]:
        """All adjacent pairs ``(a, b)`` with ``a < b``."""
        return [(a, b) for a in range(n_qubits) for b in range(a + 1, n_qubits) if self.adjacent(a, b)]

    def to_dict(self) -> dict:
        result = {"kind": self.kind}
        if self.coordinates is not None:
            result["coordinates"] = [list(c) for c in self.coordinates]
        return result

    @classmethod
    def from_dict(cls, data: dict) -> "Geometry":
        coords = data.get("coordinates")
        return cls(data.get("kind", "general"), tuple(tuple(c) for c in coords) if coords is not None else None)


@dataclass(frozen=True, eq=False)
class Gate:
    """Two-qubit unitary on ``qubits``."""

    qubits: Tuple[int, int]
    unitary: np.ndarray

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.qubits)
        if len(qubits) != 2:
            raise CircuitError(f"a gate acts on exactly two qubits, got {qubits}")
        unitary = np.array(self.unitary, dtype=complex)
        if unitary.shape != (4, 4):
            raise CircuitError(f"gate on {qubits} has shape {unitary.shape}, expected (4, 4)")
        unitary.setflags(write=False)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "unitary", unitary)


@dataclass(frozen=True, eq=False)
class LayeredCircuit:
    """Depth-ordered layers of two-qubit gates; layer 0 is applied first."""

    n_qubits: int
    layers: Tuple[Tuple[Gate, ...], ...] = ()
    geometry: Geometry = Geometry()

    def __post_init__(self):
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "layers", tuple(tuple(layer) for layer in self.layers))

    @property
    def depth(self) -> int:
        return len(self.layers)

    def gates(self) -> Iterator[Tuple[int, Gate]]:
        for index, layer in enumerate(self.layers):
            for gate in layer:
                yield index, gate

    @property
    def gate_count(self) -> int:
        return sum(len(layer) for layer in self.layers)


@dataclass(frozen=True)
class ValidationReport:
    """Verdict of :func:`validate`; falsy when a violation was found."""

    ok: bool
    layer: Optional[int] = None
    gate: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"layer {self.layer}, gate {self.gate}: {self.reason}"


def validate(circuit: LayeredCircuit) -> ValidationReport:
    """Check every circuit invariant and report the first violation.

    Example:
        >>> from shallowscope.circuit.gates import CNOT
        >>> bad = LayeredCircuit(3, [[Gate((0, 1), CNOT), Gate((1, 2), CNOT)]])
        >>> validate(bad).ok
        False
    """
    n = circuit.n_qubits
    if n < 1:
        return ValidationReport(False, reason=f"n_qubits must be positive, got {n}")
    geometry = circuit.geometry
    if geometry.kind == "square_lattice":
        if geometry.coordinates is None:
            return ValidationReport(False, reason="square_lattice geometry has no coordinates")
        if len(geometry.coordinates) != n:
            return ValidationReport(
                False, reason=f"{len(geometry.coordinates)} lattice coordinates for {n} qubits"
            )

    for layer_index, layer in enumerate(circuit.layers):
        used = set()
        for gate_index, gate in enumerate(layer):
            a, b = gate.qubits

            def violation(reason: str) -> ValidationReport:
                return ValidationReport(False, layer_index, gate_index, reason)

            if not (0 <= a < n and 0 <= b < n):
                return violation(f"qubits {gate.qubits} out of range for {n} qubits")
            if a == b:
                return violation(f"gate acts twice on qubit {a}")
            if not is_unitary(gate.unitary):
                return violation("gate matrix is not unitary within 1e-10")
            overlap = used.intersection(gate.qubits)
            if overlap:
                return violation(f"qubit {min(overlap)} already used in this layer")
            if not geometry.adjacent(a, b):
                return violation(f"qubits {gate.qubits} are not adjacent in {geometry.kind} geometry")
            used.update(gate.qubits)
    return ValidationReport(True)


def apply(circuit: LayeredCircuit, state: Optional[PureState] = None) -> PureState:
    """Return ``U_D ... U_1 |state>``; the default input is ``|0...0>``.

    Raises:
        CircuitError: If the circuit is invalid
        DimensionError: If the state size does not match the circuit
    """
    report = validate(circuit)
    if not report:
        raise CircuitError(f"invalid circuit: {report}")
    n = check_qubit_count(circuit.n_qubits)
    if state is None:
        state = PureState.basis("0" * n)
    if state.n_qubits != n:
        raise DimensionError(f"circuit on {n} qubits applied to a {state.n_qubits}-qubit state")

    vector = np.array(state.amplitudes)
    for _, gate in circuit.gates():
        vector = apply_local(gate.unitary, gate.qubits, vector, n)
    return PureState(n, vector / np.linalg.norm(vector))


def circuit_output(circuit: LayeredCircuit) -> PureState:
    """Output state ``U |0...0>``."""
    return apply(circuit)


def _layer_pairs(n: int, layer: int, geometry: Geometry, rng: np.random.Generator) -> List[Tuple[int, int]]:
    if geometry.kind == "general":
        order = rng.permutation(n)
        return [(int(order[2 * i]), int(order[2 * i + 1])) for i in range(n // 2)]
    if geometry.kind == "chain":
        # brickwork: even pairs on even layers, odd pairs on odd layers
        return [(i, i + 1) for i in range(layer % 2, n - 1, 2)]
    edges = geometry.edges(n)
    used = set()
    pairs = []
    for index in rng.permutation(len(edges)):
        a, b = edges[index]
        if a not in used and b not in used:
            pairs.append((a, b))
            used.update((a, b))
    return sorted(pairs)


def random_circuit(
    n_qubits: int,
    depth: int,
    geometry: Optional[Geometry] = None,
    seed: Optional[int] = None,
    gate_set: str = "haar",
) -> LayeredCircuit:
    """Random valid circuit with dense layers, deterministic under ``seed``.

    Layers pair qubits by a random perfect matching (general), a brickwork
    pattern (chain) or a random maximal matching of lattice edges (square
    lattice). ``gate_set`` is ``"haar"`` or ``"fixed"``.
    """
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    if gate_set not in GATE_SETS:
        raise ValueError(f"unknown gate set {gate_set!r}; expected one of {GATE_SETS}")
    geometry = geometry or Geometry.general()
    if geometry.kind == "square_lattice" and geometry.coordinates is None:
        geometry = Geometry.grid(n_qubits)

    rng = np.random.default_rng(seed)
    draw = haar_gate if gate_set == "haar" else fixed_set_gate
    layers = []
    for layer in range(depth):
        pairs = _layer_pairs(n_qubits, layer, geometry, rng)
        layers.append(tuple(Gate(pair, draw(rng)) for pair in pairs))
    logger.debug(
        "random %s circuit: n=%d depth=%d gates=%d", geometry.kind, n_qubits, depth,
        sum(len(layer) for layer in layers),
    )
    return LayeredCircuit(n_qubits, tuple(layers), geometry)


__all__ = [
    "FIXED_GATE_SET",
    "Gate",
    "Geometry",
    "LayeredCircuit",
    "ValidationReport",
    "apply",
    "circuit_output",
    "random_circuit",
    "validate",
]
