"""JSON codecs for matrices, states, circuits, Hamiltonians and marginal estimates.

Complex entries are ``[re, im]`` pairs. Floats go through ``json`` which uses
the shortest repr that round-trips, so decoding is bit-exact.
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from shallowscope.circuit.layered import Gate, Geometry, LayeredCircuit
from shallowscope.exceptions import FileFormatError
from shallowscope.parenth import HamiltonianTerm, LocalHamiltonian
from shallowscope.qcore import (
    DensityMatrix,
    HermitianOperator,
    PauliString,
    PureState,
    QubitSubset,
    StateLike,
    operator_from_pauli_coefficients,
    pauli_coefficients,
)
from shallowscope.tomography.estimators import MarginalEstimateSet

PathLike = Union[str, Path]


def complex_to_json(array: np.ndarray) -> Any:
    array = np.asarray(array, dtype=complex)
    return np.stack([array.real, array.imag], axis=-1).tolist()


def complex_from_json(data: Any) -> np.ndarray:
    array = np.asarray(data, dtype=float)
    if array.ndim == 0 or array.shape[-1] != 2:
        raise FileFormatError(f"expected [re, im] pairs, got array of shape {array.shape}")
    return array[..., 0] + 1j * array[..., 1]


def _require(data: Dict, key: str, what: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise FileFormatError(f"{what}: missing field {key!r}")
    return data[key]


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


def state_to_dict(state: StateLike) -> Dict:
    if isinstance(state, PureState):
        return {"n": state.n_qubits, "kind": "pure", "data": complex_to_json(state.amplitudes)}
    return {"n": state.n_qubits, "kind": "density", "data": complex_to_json(state.matrix)}


def state_from_dict(data: Dict) -> StateLike:
    n = int(_require(data, "n", "state"))
    kind = _require(data, "kind", "state")
    values = complex_from_json(_require(data, "data", "state"))
    if kind == "pure":
        return PureState(n, values)
    if kind == "density":
        return DensityMatrix(n, values)
    raise FileFormatError(f"state: unknown kind {kind!r}; expected 'pure' or 'density'")


# ---------------------------------------------------------------------------
# Circuits
# ---------------------------------------------------------------------------


def circuit_to_dict(circuit: LayeredCircuit) -> Dict:
    return {
        "n": circuit.n_qubits,
        "geometry": circuit.geometry.to_dict(),
        "layers": [
            [{"qubits": list(gate.qubits), "unitary": complex_to_json(gate.unitary)} for gate in layer]
            for layer in circuit.layers
        ],
    }


def circuit_from_dict(data: Dict) -> LayeredCircuit:
    n = int(_require(data, "n", "circuit"))
    geometry = Geometry.from_dict(data.get("geometry", {"kind": "general"}))
    layers = []
    for index, layer in enumerate(_require(data, "layers", "circuit")):
        gates = []
        for gate in layer:
            qubits = _require(gate, "qubits", f"circuit layer {index}")
            gates.append(Gate(tuple(qubits), complex_from_json(_require(gate, "unitary", f"circuit layer {index}"))))
        layers.append(tuple(gates))
    return LayeredCircuit(n, tuple(layers), geometry)


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------


def hamiltonian_to_dict(h: LocalHamiltonian) -> Dict:
    data = {
        "n": h.n_qubits,
        "terms": [{"support": list(t.support.indices), "matrix": complex_to_json(t.matrix)} for t in h.terms],
    }
    if h.certificate is not None:
        data["certificate"] = list(h.certificate)
    return data


def hamiltonian_from_dict(data: Dict) -> LocalHamiltonian:
    n = int(_require(data, "n", "hamiltonian"))
    terms = tuple(
        HamiltonianTerm(
            QubitSubset.of(_require(term, "support", "hamiltonian term")),
            complex_from_json(_require(term, "matrix", "hamiltonian term")),
        )
        for term in _require(data, "terms", "hamiltonian")
    )
    certificate = data.get("certificate")
    return LocalHamiltonian(n, terms, tuple(certificate) if certificate is not None else None)


# ---------------------------------------------------------------------------
# Estimates
# ---------------------------------------------------------------------------


def estimate_to_dict(operator: HermitianOperator, include_matrix: bool = True) -> Dict:
    """Pauli-coefficient map ``{"IZ": Tr(sigma IZ), ...}`` plus the optional dense matrix."""
    alpha = pauli_coefficients(operator.matrix, operator.n_qubits)
    data = {
        "n": operator.n_qubits,
        "pauli": {str(PauliString.from_code(code, operator.n_qubits)): float(value) for code, value in enumerate(alpha)},
    }
    if include_matrix:
        data["matrix"] = complex_to_json(operator.matrix)
    return data


def estimate_from_dict(data: Dict) -> HermitianOperator:
    n = int(_require(data, "n", "estimate"))
    if "matrix" in data:
        return HermitianOperator(n, complex_from_json(data["matrix"]))
    alpha = np.zeros(4 ** n)
    for letters, value in _require(data, "pauli", "estimate").items():
        pauli = PauliString(letters)
        if pauli.n_qubits != n:
            raise FileFormatError(f"estimate: Pauli string {letters} does not have {n} letters")
        alpha[pauli.code] = float(value)
    return HermitianOperator(n, operator_from_pauli_coefficients(alpha, n))


def estimates_to_dict(estimates: MarginalEstimateSet, include_matrix: bool = True) -> Dict:
    return {
        "n": estimates.n_qubits,
        "k": estimates.k,
        "repetitions": estimates.repetitions,
        "epsilon": estimates.epsilon,
        "delta": estimates.delta,
        "estimates": {s.label: estimate_to_dict(estimates[s], include_matrix) for s in estimates.subsets()},
        "diagnostics": estimates.diagnostics,
    }


def estimates_from_dict(data: Dict) -> MarginalEstimateSet:
    entries = _require(data, "estimates", "marginal estimates")
    return MarginalEstimateSet(
        n_qubits=int(_require(data, "n", "marginal estimates")),
        k=int(_require(data, "k", "marginal estimates")),
        estimates={QubitSubset.parse(label): estimate_from_dict(entry) for label, entry in entries.items()},
        repetitions=int(data.get("repetitions", 0)),
        epsilon=data.get("epsilon"),
        delta=data.get("delta"),
        diagnostics=data.get("diagnostics", {}),
    )


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------


def read_json(path: PathLike) -> Dict:
    """Load a JSON document.

    Raises:
        FileNotFoundError: If the file does not exist
        FileFormatError: If the file is not valid JSON
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise FileFormatError(f"{path}: line {e.lineno}: {e.msg}") from e


def write_json(data: Dict, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, sort_keys=True)
        f.write("\n")
    return path


def load(path: PathLike, decoder) -> Any:
    """Read ``path`` and decode it, tagging decode errors with the file name."""
    data = read_json(path)
    try:
        return decoder(data)
    except FileFormatError as e:
        raise FileFormatError(f"{path}: {e}") from e
