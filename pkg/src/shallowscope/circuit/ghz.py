"""GHZ states and shallow GHZ-preparing circuits for each geometry."""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from shallowscope.circuit.gamma2 import augment_matching, gamma2, gamma2_result
from shallowscope.circuit.gates import BELL, CNOT
from shallowscope.circuit.layered import Gate, Geometry, LayeredCircuit
from shallowscope.exceptions import CircuitError
from shallowscope.qcore import MAX_QUBITS, PureState, check_qubit_count

logger = logging.getLogger(__name__)


def ghz_state(n_qubits: int) -> PureState:
    """``(|0...0> + |1...1>) / sqrt(2)``."""
    n = check_qubit_count(n_qubits)
    vec = np.zeros(2 ** n, dtype=complex)
    vec[0] = vec[-1] = 1 / np.sqrt(2)
    return PureState(n, vec)


def ghz_circuit(n_qubits: int, geometry: Optional[Geometry] = None) -> LayeredCircuit:
    """Shallow circuit mapping ``|0...0>`` to the GHZ state.

    * general: a Bell pair, then every entangled qubit copies itself onto a
      fresh one per layer; depth ``ceil(log2 n)``.
    * chain: a Bell pair in the middle, grown outwards at both ends; depth
      ``ceil(n / 2)``.
    * square lattice: without coordinates, the embedding follows an optimal
      gamma_2 growth process, giving depth ``min{D : gamma_2(D) >= n}``. With
      coordinates, the circuit grows from the best root by maximum matching.

    Raises:
        CircuitError: If ``n < 2`` or the lattice coordinates are unusable
    """
    geometry = geometry or Geometry.general()
    if n_qubits < 2:
        raise CircuitError(f"a GHZ circuit needs at least 2 qubits, got {n_qubits}")
    if n_qubits > MAX_QUBITS:
        raise CircuitError(f"n_qubits={n_qubits} exceeds the dense limit of {MAX_QUBITS}")

    if geometry.kind == "general":
        circuit = _doubling_circuit(n_qubits)
    elif geometry.kind == "chain":
        circuit = _chain_circuit(n_qubits)
    elif geometry.coordinates is None:
        circuit = _growth_process_circuit(n_qubits)
    else:
        circuit = _matching_circuit(n_qubits, geometry)
    logger.debug("GHZ circuit on %d qubits (%s): depth %d", n_qubits, geometry.kind, circuit.depth)
    return circuit


def _doubling_circuit(n: int) -> LayeredCircuit:
    layers = [(Gate((0, 1), BELL),)]
    size = 2
    while size < n:
        layers.append(tuple(Gate((i, i + size), CNOT) for i in range(size) if i + size < n))
        size *= 2
    return LayeredCircuit(n, layers, Geometry.general())


def _chain_circuit(n: int) -> LayeredCircuit:
    lo = (n - 2) // 2
    hi = lo + 1
    layers = [(Gate((lo, hi), BELL),)]
    while lo > 0 or hi < n - 1:
        layer = []
        if lo > 0:
            layer.append(Gate((lo, lo - 1), CNOT))
            lo -= 1
        if hi < n - 1:
            layer.append(Gate((hi, hi + 1), CNOT))
            hi += 1
        layers.append(tuple(layer))
    return LayeredCircuit(n, layers, Geometry.chain())


def _growth_process_circuit(n: int) -> LayeredCircuit:
    depth = 1
    while gamma2(depth) < n:
        depth += 1
    process = gamma2_result(depth).process

    index: Dict[Tuple[int, int], int] = {(0, 0): 0}
    layers = []
    for step, recruits in enumerate(process):
        layer = []
        for parent, child in recruits:
            index[child] = len(index)
            if index[child] >= n:
                continue
            layer.append(Gate((index[parent], index[child]), BELL if step == 0 else CNOT))
        layers.append(tuple(layer))
    coordinates = sorted(index, key=index.get)[:n]
    return LayeredCircuit(n, layers, Geometry.square_lattice(coordinates))


def _grow_from(root: int, neighbours: List[List[int]]) -> Optional[List[List[Tuple[int, int]]]]:
    """Greedy growth by maximum matching; ``None`` when some site is unreachable."""
    current = {root}
    steps: List[List[Tuple[int, int]]] = []
    while len(current) < len(neighbours):
        boundary = sorted({q for p in current for q in neighbours[p] if q not in current})
        if not boundary:
            return None
        parents_of = {q: [p for p in neighbours[q] if p in current] for q in boundary}
        owner: Dict[int, int] = {}
        for child in boundary:
            augment_matching(child, parents_of, owner, set())
        steps.append(sorted(owner.items()))
        current.update(owner.values())
    return steps


def _matching_circuit(n: int, geometry: Geometry) -> LayeredCircuit:
    coordinates: Sequence = geometry.coordinates
    if len(coordinates) != n:
        raise CircuitError(f"{len(coordinates)} lattice coordinates for {n} qubits")
    neighbours = [[b for b in range(n) if geometry.adjacent(a, b)] for a in range(n)]

    best = None
    for root in range(n):
        steps = _grow_from(root, neighbours)
        if steps is not None and (best is None or len(steps) < len(best)):
            best = steps
    if best is None:
        raise CircuitError("square-lattice coordinates are not connected; no GHZ circuit exists")

    layers = []
    for step, pairs in enumerate(best):
        gate = BELL if step == 0 else CNOT
        layers.append(tuple(Gate(pair, gate) for pair in pairs))
    return LayeredCircuit(n, layers, geometry)


def ghz_depth(n_qubits: int, geometry: Geometry) -> int:
    """Depth of :func:`ghz_circuit` for general and chain geometries."""
    if geometry.kind == "general":
        return math.ceil(math.log2(n_qubits))
    if geometry.kind == "chain":
        return math.ceil(n_qubits / 2)
    return ghz_circuit(n_qubits, geometry).depth
