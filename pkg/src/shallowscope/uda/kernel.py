"""Marginal maps and their kernels in Pauli coordinates.

A Hermitian operator ``sum_Q a_Q P_Q / 2**n`` has zero marginal on ``s`` iff
``a_Q = 0`` for every ``Q`` supported inside ``s``. The kernel of the map to
all marginals on an interaction graph, together with the trace constraint, is
therefore spanned by the normalized ``P_Q / sqrt(2**n)`` with ``Q`` not
contained in any subset of the graph.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple

import numpy as np

from shallowscope.exceptions import DimensionError
from shallowscope.qcore import (
    HermitianOperator,
    PauliString,
    QubitSubset,
    StateLike,
    SubsetLike,
    as_matrix,
    as_subset,
    check_qubit_count,
    partial_trace,
    pauli_coefficients,
    pauli_matrix,
)

logger = logging.getLogger(__name__)

KERNEL_MAX_QUBITS = 8


def support_masks(n_qubits: int) -> np.ndarray:
    """Support bit mask of every Pauli code (qubit 0 is the most significant bit)."""
    masks = np.zeros(1, dtype=np.int64)
    for _ in range(n_qubits):
        masks = (masks[:, None] * 2 + np.array([0, 1, 1, 1])[None, :]).reshape(-1)
    return masks


def subset_mask(subset: QubitSubset, n_qubits: int) -> int:
    return sum(1 << (n_qubits - 1 - q) for q in subset)


@dataclass(frozen=True)
class MarginalMap:
    """Linear map from operators to their marginals on an interaction graph."""

    n_qubits: int
    subsets: Tuple[QubitSubset, ...]

    def __post_init__(self):
        n = check_qubit_count(self.n_qubits)
        subsets = tuple(as_subset(s) for s in self.subsets)
        if not subsets:
            raise ValueError("a marginal map needs at least one subset")
        for s in subsets:
            if len(s) == 0:
                raise ValueError("interaction graph subsets must be nonempty")
            s.check_range(n)
        object.__setattr__(self, "subsets", subsets)

    @classmethod
    def of(cls, n_qubits: int, subsets: Iterable[SubsetLike]) -> "MarginalMap":
        return cls(n_qubits, tuple(as_subset(s) for s in subsets))

    def constrained(self) -> np.ndarray:
        """Boolean mask over Pauli codes fixed by the marginals (identity included)."""
        masks = support_masks(self.n_qubits)
        fixed = np.zeros(len(masks), dtype=bool)
        for s in self.subsets:
            fixed |= (masks & ~subset_mask(s, self.n_qubits)) == 0
        return fixed

    def apply(self, state: StateLike) -> Tuple[HermitianOperator, ...]:
        return tuple(partial_trace(state, s) for s in self.subsets)

    def max_deviation(self, a: StateLike, b: StateLike) -> float:
        """Largest entrywise difference between the marginals of ``a`` and ``b``."""
        return max(
            float(np.max(np.abs(x.matrix - y.matrix))) for x, y in zip(self.apply(a), self.apply(b))
        )


@dataclass(frozen=True, eq=False)
class KernelBasis:
    """Hilbert-Schmidt orthonormal basis ``P_Q / sqrt(2**n)`` of the kernel."""

    n_qubits: int
    codes: np.ndarray

    def __post_init__(self):
        self.codes.setflags(write=False)

    def __len__(self) -> int:
        return len(self.codes)

    @property
    def dimension(self) -> int:
        return len(self.codes)

    def element(self, index: int) -> HermitianOperator:
        pauli = PauliString.from_code(int(self.codes[index]), self.n_qubits)
        return HermitianOperator._trusted(self.n_qubits, pauli_matrix(pauli).matrix / np.sqrt(2 ** self.n_qubits))

    def __iter__(self) -> Iterator[HermitianOperator]:
        return (self.element(i) for i in range(len(self)))

    def coordinates(self, operator: StateLike) -> np.ndarray:
        """Coefficients of the orthogonal projection of ``operator`` onto the kernel."""
        alpha = pauli_coefficients(as_matrix(operator), self.n_qubits)
        return alpha[self.codes] / np.sqrt(2 ** self.n_qubits)


def kernel_basis(marginal_map: MarginalMap) -> KernelBasis:
    """Basis of the traceless, marginal-free operators for ``marginal_map``.

    Raises:
        DimensionError: If n exceeds :data:`KERNEL_MAX_QUBITS`
    """
    n = marginal_map.n_qubits
    if n > KERNEL_MAX_QUBITS:
        raise DimensionError(f"kernel computation supports n <= {KERNEL_MAX_QUBITS}, got {n}")
    codes = np.flatnonzero(~marginal_map.constrained())
    logger.debug("kernel of %d subsets on %d qubits has dimension %d", len(marginal_map.subsets), n, len(codes))
    return KernelBasis(n, codes)
