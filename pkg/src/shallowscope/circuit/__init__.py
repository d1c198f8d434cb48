"""Layered circuits, light cones, gamma_2 and GHZ constructions."""

from shallowscope.circuit.gamma2 import (
    MAX_EXACT_DEPTH,
    Gamma2Result,
    canonical_form,
    gamma2,
    gamma2_result,
    gamma2_search,
    gamma2_upper_bound,
)
from shallowscope.circuit.gates import BELL, CNOT, HADAMARD, haar_gate, su4_gate
from shallowscope.circuit.ghz import ghz_circuit, ghz_depth, ghz_state
from shallowscope.circuit.layered import (
    Gate,
    Geometry,
    LayeredCircuit,
    ValidationReport,
    apply,
    circuit_output,
    random_circuit,
    validate,
)
from shallowscope.circuit.lightcone import LightCone, light_cone, locality_bound, locality_for_depth

__all__ = [
    "BELL",
    "CNOT",
    "HADAMARD",
    "MAX_EXACT_DEPTH",
    "Gamma2Result",
    "Gate",
    "Geometry",
    "LayeredCircuit",
    "LightCone",
    "ValidationReport",
    "apply",
    "canonical_form",
    "circuit_output",
    "gamma2",
    "gamma2_result",
    "gamma2_search",
    "gamma2_upper_bound",
    "ghz_circuit",
    "ghz_depth",
    "ghz_state",
    "haar_gate",
    "light_cone",
    "locality_bound",
    "locality_for_depth",
    "random_circuit",
    "su4_gate",
    "validate",
]
