"""Light cones of single qubits through layered circuits, and their size bounds."""

import logging
from dataclasses import dataclass
from typing import Optional, Union

from shallowscope.circuit.gamma2 import MAX_EXACT_DEPTH, gamma2, gamma2_upper_bound
from shallowscope.circuit.layered import GEOMETRY_KINDS, Geometry, LayeredCircuit
from shallowscope.exceptions import DimensionError
from shallowscope.qcore import QubitSubset

logger = logging.getLogger(__name__)

DIRECTIONS = ("input", "output")


@dataclass(frozen=True)
class LightCone:
    """Qubits reached from ``qubit`` through the circuit.

    For ``direction="input"`` the support is that of ``U O_qubit U^dagger``,
    with ``O`` acting on input qubit ``qubit``. For ``"output"`` it is the set
    of input qubits that can influence output qubit ``qubit``.
    """

    qubit: int
    support: QubitSubset
    direction: str = "input"

    def __post_init__(self):
        if self.qubit not in self.support:
            raise ValueError(f"light cone of qubit {self.qubit} must contain it, got {self.support.label}")

    def __len__(self) -> int:
        return len(self.support)


def light_cone(circuit: LayeredCircuit, qubit: int, direction: str = "input") -> LightCone:
    """Propagate a single-qubit support through the layers of ``circuit``.

    Every gate touching the current support adds both of its qubits. Gates in
    one layer are disjoint, so the order within a layer does not matter.

    Raises:
        DimensionError: If ``qubit`` is out of range
        ValueError: If ``direction`` is unknown
    """
    if not 0 <= qubit < circuit.n_qubits:
        raise DimensionError(f"qubit {qubit} out of range for {circuit.n_qubits} qubits")
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}; expected one of {DIRECTIONS}")

    layers = circuit.layers if direction == "input" else tuple(reversed(circuit.layers))
    support = {qubit}
    for layer in layers:
        for gate in layer:
            if support.intersection(gate.qubits):
                support.update(gate.qubits)
    return LightCone(qubit, QubitSubset.of(support), direction)


def locality_bound(depth: int, geometry: Union[Geometry, str] = "general") -> int:
    """Largest light cone a depth-``depth`` circuit can produce.

    ``2**D`` for general circuits, ``2D`` on a chain and ``gamma_2(D)`` on the
    square lattice. Past the exact gamma_2 range the lattice bound falls back to
    :func:`gamma2_upper_bound`.
    """
    kind = geometry.kind if isinstance(geometry, Geometry) else geometry
    if kind not in GEOMETRY_KINDS:
        raise ValueError(f"unknown geometry {kind!r}; expected one of {GEOMETRY_KINDS}")
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    if kind == "general":
        return 2 ** depth
    if kind == "chain":
        return max(1, 2 * depth)
    if depth > MAX_EXACT_DEPTH:
        return gamma2_upper_bound(depth)
    return gamma2(depth)


def locality_for_depth(depth: int, geometry: Union[Geometry, str], n_qubits: Optional[int] = None) -> int:
    """Marginal size k implied by depth ``depth``, capped at ``n_qubits`` when given."""
    bound = locality_bound(depth, geometry)
    if n_qubits is not None:
        bound = min(bound, int(n_qubits))
    return bound
