"""Two-qubit gate constructors.

Gates are raw 4x4 unitaries; the first qubit of a gate's pair is the most
significant qubit of the local basis ``|ab>``.
"""

from itertools import product
from typing import Dict, Sequence

import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from shallowscope.qcore import PAULI_BASIS

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
IDENTITY_2 = np.eye(2, dtype=complex)

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    dtype=complex,
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
    dtype=complex,
)
ISWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]],
    dtype=complex,
)
BELL = CNOT @ np.kron(HADAMARD, IDENTITY_2)

for _gate in (HADAMARD, CNOT, CZ, SWAP, ISWAP, BELL):
    _gate.setflags(write=False)

FIXED_GATE_SET: Dict[str, np.ndarray] = {
    "bell": BELL,
    "cnot": CNOT,
    "cz": CZ,
    "iswap": ISWAP,
    "swap": SWAP,
}

# The 15 non-identity two-qubit Pauli products, in base-4 code order.
SU4_GENERATORS = np.array(
    [np.kron(PAULI_BASIS[a], PAULI_BASIS[b]) for a, b in product(range(4), repeat=2) if (a, b) != (0, 0)]
)
SU4_GENERATORS.setflags(write=False)
SU4_PARAMETERS = len(SU4_GENERATORS)


def haar_gate(rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of U(4)."""
    return unitary_group.rvs(4, random_state=rng)


def fixed_set_gate(rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from :data:`FIXED_GATE_SET` (keys in sorted order)."""
    names = sorted(FIXED_GATE_SET)
    return np.array(FIXED_GATE_SET[names[int(rng.integers(len(names)))]])


def su4_gate(angles: Sequence[float]) -> np.ndarray:
    """``expm(i * sum_a angles[a] * G_a)`` over the 15 Pauli-product generators."""
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (SU4_PARAMETERS,):
        raise ValueError(f"expected {SU4_PARAMETERS} angles, got shape {angles.shape}")
    generator = np.tensordot(angles, SU4_GENERATORS, axes=(0, 0))
    return expm(1j * generator)


def is_unitary(matrix: np.ndarray, tol: float = 1e-10) -> bool:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    return bool(np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0]))) <= tol)
