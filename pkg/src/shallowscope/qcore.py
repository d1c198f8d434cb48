"""Dense linear-algebra substrate: states, operators, Pauli algebra, distances.

Qubit 0 is the most significant bit of every computational-basis index, so
``|q0 q1 ... q(n-1)>`` has index ``q0 * 2**(n-1) + ... + q(n-1)``. Every other
module relies on this convention.

All types are immutable after construction (their arrays are read-only) and
every function here is pure.
"""

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import unitary_group

from shallowscope.exceptions import DimensionError, InvalidStateError

logger = logging.getLogger(__name__)

MAX_QUBITS = 12
STRUCTURAL_TOL = 1e-10
SPECTRAL_TOL = 1e-9

PAULI_LETTERS = "IXYZ"

PAULI_BASIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
PAULI_BASIS.setflags(write=False)

# [a, i, j] = P_a[j, i], so that sum_ij M[i, j] * T[a, i, j] = Tr(M P_a)
_PAULI_TRANSPOSED = np.ascontiguousarray(PAULI_BASIS.transpose(0, 2, 1))


def _read_only(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def check_qubit_count(n: int) -> int:
    """Validate a register size against the dense-simulation limit."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DimensionError(f"n_qubits must be a positive integer, got {n!r}")
    if n > MAX_QUBITS:
        raise DimensionError(f"n_qubits={n} exceeds the dense limit of {MAX_QUBITS}")
    return int(n)


def _qubits_for_dimension(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2 ** n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over ``2**n_qubits`` amplitudes."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        check_qubit_count(self.n_qubits)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (2 ** self.n_qubits,):
            raise DimensionError(
                f"expected {2 ** self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got {amps.shape[0]}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > STRUCTURAL_TOL:
            raise InvalidStateError(f"amplitudes have squared norm {norm!r}, expected 1")
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "amplitudes", _read_only(amps))

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    @classmethod
    def from_vector(cls, vector: Sequence[complex], normalize: bool = False) -> "PureState":
        """Build a state from a raw vector, inferring the qubit count."""
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        n = _qubits_for_dimension(vec.shape[0])
        if normalize:
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise InvalidStateError("cannot normalize the zero vector")
            vec = vec / norm
        return cls(n, vec)

    @classmethod
    def basis(cls, bits: str) -> "PureState":
        """Computational basis state, e.g. ``PureState.basis("010")``."""
        if not bits or set(bits) - {"0", "1"}:
            raise InvalidStateError(f"basis label must be a nonempty bit string, got {bits!r}")
        n = len(bits)
        vec = np.zeros(2 ** n, dtype=complex)
        vec[int(bits, 2)] = 1.0
        return cls(n, vec)

    def density(self) -> "DensityMatrix":
        return DensityMatrix._trusted(self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Hermitian matrix on ``n_qubits`` qubits with unconstrained trace.

    Holds raw tomography estimates (which may fail to be PSD) and
    perturbation directions.
    """

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        check_qubit_count(self.n_qubits)
        mat = np.asarray(self.matrix, dtype=complex)
        dim = 2 ** self.n_qubits
        if mat.shape != (dim, dim):
            raise DimensionError(
                f"expected a {dim}x{dim} matrix for {self.n_qubits} qubits, got {mat.shape}"
            )
        deviation = float(np.max(np.abs(mat - mat.conj().T)))
        if deviation > STRUCTURAL_TOL:
            raise InvalidStateError(f"matrix is not Hermitian (max deviation {deviation:.3e})")
        self._check_invariants(mat)
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "matrix", _read_only(mat))

    def _check_invariants(self, matrix: np.ndarray) -> None:
        """Subclass hook for extra checks on the validated matrix."""

    @classmethod
    def _trusted(cls, n_qubits: int, matrix: np.ndarray):
        """Wrap a matrix that is valid by construction, skipping the checks."""
        obj = object.__new__(cls)
        mat = np.asarray(matrix, dtype=complex)
        object.__setattr__(obj, "n_qubits", int(n_qubits))
        object.__setattr__(obj, "matrix", _read_only((mat + mat.conj().T) / 2))
        return obj

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in ascending order."""
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True, eq=False)
class DensityMatrix(HermitianOperator):
    """Hermitian, unit-trace, positive semidefinite matrix."""

    def _check_invariants(self, matrix: np.ndarray) -> None:
        trace = float(np.trace(matrix).real)
        if abs(trace - 1.0) > STRUCTURAL_TOL:
            raise InvalidStateError(f"density matrix has trace {trace!r}, expected 1")
        min_eig = float(np.linalg.eigvalsh(matrix)[0])
        if min_eig < -SPECTRAL_TOL:
            raise InvalidStateError(f"density matrix is not PSD (min eigenvalue {min_eig:.3e})")

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        check_qubit_count(n_qubits)
        dim = 2 ** n_qubits
        return cls._trusted(n_qubits, np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class PauliString:
    """Word over {I, X, Y, Z}; letter q acts on qubit q."""

    letters: str

    def __post_init__(self):
        letters = str(self.letters).upper()
        if not letters or set(letters) - set(PAULI_LETTERS):
            raise ValueError(f"Pauli string must be a nonempty word over IXYZ, got {self.letters!r}")
        object.__setattr__(self, "letters", letters)

    def __str__(self) -> str:
        return self.letters

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        return sum(1 for c in self.letters if c != "I")

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(q for q, c in enumerate(self.letters) if c != "I")

    @property
    def code(self) -> int:
        """Base-4 index with qubit 0 as the most significant digit."""
        value = 0
        for c in self.letters:
            value = value * 4 + PAULI_LETTERS.index(c)
        return value

    @classmethod
    def from_code(cls, code: int, n_qubits: int) -> "PauliString":
        if not 0 <= code < 4 ** n_qubits:
            raise ValueError(f"Pauli code {code} out of range for {n_qubits} qubits")
        letters = []
        for _ in range(n_qubits):
            code, digit = divmod(code, 4)
            letters.append(PAULI_LETTERS[digit])
        return cls("".join(reversed(letters)))


@dataclass(frozen=True)
class QubitSubset:
    """Strictly increasing tuple of qubit positions."""

    indices: Tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(i < 0 for i in idx):
            raise DimensionError(f"qubit indices must be nonnegative, got {idx}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"qubit indices must be strictly increasing, got {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, indices: Iterable[int]) -> "QubitSubset":
        """Build from any iterable; rejects duplicates, sorts the rest."""
        idx = [int(i) for i in indices]
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate qubit index in {idx}")
        return cls(tuple(sorted(idx)))

    @classmethod
    def parse(cls, label: str) -> "QubitSubset":
        """Parse the ``"0,3"`` label form."""
        label = label.strip()
        if not label:
            return cls(())
        return cls.of(int(part) for part in label.split(","))

    @property
    def label(self) -> str:
        return ",".join(str(i) for i in self.indices)

    def check_range(self, n_qubits: int) -> "QubitSubset":
        if self.indices and self.indices[-1] >= n_qubits:
            raise DimensionError(f"subset {self.label} out of range for {n_qubits} qubits")
        return self

    def complement(self, n_qubits: int) -> Tuple[int, ...]:
        kept = set(self.indices)
        return tuple(q for q in range(n_qubits) if q not in kept)

    def issubset(self, other: "QubitSubset") -> bool:
        return set(self.indices) <= set(other.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, qubit: object) -> bool:
        return qubit in self.indices


SubsetLike = Union[QubitSubset, Iterable[int]]
StateLike = Union[PureState, HermitianOperator]


def as_subset(subset: SubsetLike) -> QubitSubset:
    if isinstance(subset, QubitSubset):
        return subset
    return QubitSubset.of(subset)


def as_matrix(state: StateLike) -> np.ndarray:
    """Dense matrix of a pure state, density matrix or Hermitian operator."""
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    if isinstance(state, HermitianOperator):
        return state.matrix
    raise TypeError(f"expected a PureState or HermitianOperator, got {type(state).__name__}")


def _check_same_size(a: StateLike, b: StateLike) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")


# ---------------------------------------------------------------------------
# Pauli algebra
# ---------------------------------------------------------------------------


def pauli_matrix(p: Union[PauliString, str]) -> HermitianOperator:
    """Kronecker product of single-qubit Pauli matrices in qubit order.

    Example:
        >>> pauli_matrix("Z").matrix.real
        array([[ 1.,  0.],
               [ 0., -1.]])
    """
    p = PauliString(str(p))
    check_qubit_count(p.n_qubits)
    factors = [PAULI_BASIS[PAULI_LETTERS.index(c)] for c in p.letters]
    return HermitianOperator._trusted(p.n_qubits, reduce(np.kron, factors))


def _pauli_action(p: PauliString) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(targets, phases)`` with ``P|b> = phases[b] |targets[b]>``."""
    n = p.n_qubits
    index = np.arange(2 ** n)
    flip = 0
    phases = np.ones(2 ** n, dtype=complex)
    for q, letter in enumerate(p.letters):
        shift = n - 1 - q
        sign = 1 - 2 * ((index >> shift) & 1)
        if letter in "XY":
            flip |= 1 << shift
        if letter == "Y":
            phases *= 1j * sign
        elif letter == "Z":
            phases *= sign
    return index ^ flip, phases


def pauli_expectation(state: StateLike, p: Union[PauliString, str]) -> float:
    """Return ``Tr(rho P)`` without materializing the Pauli matrix.

    Raises:
        DimensionError: If the Pauli string and the state differ in size
        InvalidStateError: If the imaginary residue exceeds 1e-9
    """
    p = PauliString(str(p))
    if p.n_qubits != state.n_qubits:
        raise DimensionError(f"Pauli string on {p.n_qubits} qubits, state on {state.n_qubits}")
    targets, phases = _pauli_action(p)
    if isinstance(state, PureState):
        amps = state.amplitudes
        value = np.sum(amps[targets].conj() * phases * amps)
    else:
        rows = np.arange(state.dim)
        value = np.sum(state.matrix[rows, targets] * phases)
    if abs(value.imag) > SPECTRAL_TOL:
        raise InvalidStateError(f"Pauli expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


def pauli_coefficients(matrix: np.ndarray, n_qubits: int) -> np.ndarray:
    """Real coefficients ``alpha_Q = Tr(M P_Q)`` for all ``4**n`` Pauli codes."""
    tensor = np.asarray(matrix, dtype=complex).reshape([2] * (2 * n_qubits))
    interleave = [axis for q in range(n_qubits) for axis in (q, n_qubits + q)]
    tensor = tensor.transpose(interleave)
    for _ in range(n_qubits):
        tensor = np.tensordot(tensor, _PAULI_TRANSPOSED, axes=([0, 1], [1, 2]))
    return np.ascontiguousarray(tensor.reshape(-1).real)


def operator_from_pauli_coefficients(alpha: np.ndarray, n_qubits: int) -> np.ndarray:
    """Inverse of :func:`pauli_coefficients`: ``sum_Q alpha_Q P_Q / 2**n``."""
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (4 ** n_qubits,):
        raise DimensionError(f"expected {4 ** n_qubits} coefficients, got {alpha.shape}")
    tensor = alpha.astype(complex).reshape([4] * n_qubits)
    for _ in range(n_qubits):
        tensor = np.tensordot(tensor, PAULI_BASIS, axes=([0], [0]))
    # axes are now (i0, j0, i1, j1, ...)
    order = list(range(0, 2 * n_qubits, 2)) + list(range(1, 2 * n_qubits, 2))
    dim = 2 ** n_qubits
    return tensor.transpose(order).reshape(dim, dim) / dim


def pauli_weights(n_qubits: int) -> np.ndarray:
    """Weight of every Pauli code, as an int array of length ``4**n``."""
    weights = np.zeros(1, dtype=np.int64)
    for _ in range(n_qubits):
        weights = (weights[:, None] + np.array([0, 1, 1, 1])[None, :]).reshape(-1)
    return weights


# ---------------------------------------------------------------------------
# Local operations
# ---------------------------------------------------------------------------


def apply_local(unitary: np.ndarray, targets: Sequence[int], vectors: np.ndarray, n_qubits: int) -> np.ndarray:
    """Apply a ``2**k x 2**k`` operator on ``targets`` to a vector or column batch.

    The first target is the most significant qubit of the local operator.
    ``vectors`` has shape ``(2**n,)`` or ``(2**n, m)``.
    """
    k = len(targets)
    vecs = np.asarray(vectors)
    tensor = vecs.reshape([2] * n_qubits + [-1])
    gate = np.asarray(unitary).reshape([2] * (2 * k))
    out = np.tensordot(gate, tensor, axes=(list(range(k, 2 * k)), list(targets)))
    out = np.moveaxis(out, list(range(k)), list(targets))
    return out.reshape(vecs.shape)


def conjugate_local(unitary: np.ndarray, targets: Sequence[int], matrix: np.ndarray, n_qubits: int) -> np.ndarray:
    """Return ``V M V^dagger`` for a local ``V`` acting on ``targets``."""
    left = apply_local(unitary, targets, matrix, n_qubits)
    both = apply_local(unitary, targets, left.conj().T, n_qubits)
    return both.conj().T


def embed_operator(operator: np.ndarray, support: SubsetLike, n_qubits: int) -> np.ndarray:
    """Dense ``2**n`` matrix of ``operator`` on ``support`` tensored with identity."""
    support = as_subset(support).check_range(n_qubits)
    k = len(support)
    op = np.asarray(operator, dtype=complex)
    if op.shape != (2 ** k, 2 ** k):
        raise DimensionError(f"operator shape {op.shape} does not match support of size {k}")
    rest = support.complement(n_qubits)
    full = np.kron(op, np.eye(2 ** len(rest), dtype=complex))
    inverse = list(np.argsort(list(support.indices) + list(rest)))
    order = inverse + [n_qubits + axis for axis in inverse]
    dim = 2 ** n_qubits
    return full.reshape([2] * (2 * n_qubits)).transpose(order).reshape(dim, dim)


def partial_trace(state: StateLike, keep: SubsetLike) -> HermitianOperator:
    """Reduced operator on ``keep`` (ascending qubit order).

    Returns a :class:`DensityMatrix` for pure states and density matrices and
    a :class:`HermitianOperator` otherwise.

    Example:
        >>> plus = PureState.from_vector([1, 1, 1, 1], normalize=True)
        >>> partial_trace(plus, [1]).matrix.real
        array([[0.5, 0.5],
               [0.5, 0.5]])
    """
    keep = as_subset(keep)
    n = state.n_qubits
    if len(keep) == 0:
        raise DimensionError("partial trace needs a nonempty subset to keep")
    keep.check_range(n)
    k = len(keep)
    rest = list(keep.complement(n))

    if isinstance(state, PureState):
        tensor = state.amplitudes.reshape([2] * n).transpose(list(keep) + rest)
        block = tensor.reshape(2 ** k, 2 ** (n - k))
        reduced = block @ block.conj().T
    else:
        order = list(keep) + rest + [n + q for q in keep] + [n + q for q in rest]
        tensor = state.matrix.reshape([2] * (2 * n)).transpose(order)
        tensor = tensor.reshape(2 ** k, 2 ** (n - k), 2 ** k, 2 ** (n - k))
        reduced = np.einsum("ajbj->ab", tensor)

    if isinstance(state, (PureState, DensityMatrix)):
        return DensityMatrix._trusted(k, reduced)
    return HermitianOperator._trusted(k, reduced)


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def trace_distance(a: StateLike, b: StateLike) -> float:
    """Trace norm ``||a - b||_1`` (sum of absolute eigenvalues, no 1/2 factor)."""
    _check_same_size(a, b)
    return float(np.sum(np.abs(np.linalg.eigvalsh(as_matrix(a) - as_matrix(b)))))


def frobenius_distance(a: StateLike, b: StateLike) -> float:
    """Hilbert-Schmidt norm ``||a - b||_2``."""
    _check_same_size(a, b)
    return float(np.linalg.norm(as_matrix(a) - as_matrix(b)))


def fidelity_pure(psi: PureState, rho: StateLike) -> float:
    """Overlap ``<psi|rho|psi>``, clipped to [0, 1]."""
    _check_same_size(psi, rho)
    if isinstance(rho, PureState):
        value = abs(np.vdot(rho.amplitudes, psi.amplitudes)) ** 2
    else:
        value = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes).real
    return float(min(1.0, max(0.0, value)))


# ---------------------------------------------------------------------------
# Random fixtures
# ---------------------------------------------------------------------------


RngLike = Union[None, int, np.random.Generator]


def _rng(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def random_pure_state(n_qubits: int, rng: RngLike = None) -> PureState:
    """Haar-random pure state."""
    rng = _rng(rng)
    dim = 2 ** check_qubit_count(n_qubits)
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return PureState(n_qubits, vec / np.linalg.norm(vec))


def random_density_matrix(n_qubits: int, rank: Optional[int] = None, rng: RngLike = None) -> DensityMatrix:
    """Random state: Haar eigenbasis with a flat-Dirichlet spectrum of the given rank."""
    rng = _rng(rng)
    dim = 2 ** check_qubit_count(n_qubits)
    rank = dim if rank is None else int(rank)
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    spectrum = np.zeros(dim)
    spectrum[:rank] = rng.dirichlet(np.ones(rank))
    basis = unitary_group.rvs(dim, random_state=rng) if dim > 1 else np.eye(1)
    return DensityMatrix._trusted(n_qubits, (basis * spectrum) @ basis.conj().T)


def random_hermitian(n_qubits: int, rng: RngLike = None) -> HermitianOperator:
    """Hermitian matrix with independent Gaussian entries."""
    rng = _rng(rng)
    dim = 2 ** check_qubit_count(n_qubits)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator._trusted(n_qubits, g + g.conj().T)
