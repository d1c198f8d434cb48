"""Parent Hamiltonians of circuit outputs, exact spectra and the robust fingerprint check.

For a depth-D circuit ``U`` the projectors ``|1><1|_i`` (whose unique ground
state is ``|0...0>``) are conjugated into ``U |1><1|_i U^dagger``. Qubits whose
light cones coincide are merged into one class ``S_j``, contributing the single
projector ``U (I - |0...0><0...0|_{S_j}) U^dagger`` on the shared cone. The
result is frustration free with gap 1 and ground state ``U |0...0>``.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from shallowscope.circuit.layered import LayeredCircuit, validate
from shallowscope.circuit.lightcone import light_cone
from shallowscope.exceptions import CircuitError, DimensionError, InvalidStateError, NotUniqueGroundStateError
from shallowscope.qcore import (
    MAX_QUBITS,
    SPECTRAL_TOL,
    DensityMatrix,
    HermitianOperator,
    PureState,
    QubitSubset,
    StateLike,
    as_subset,
    check_qubit_count,
    conjugate_local,
    embed_operator,
    fidelity_pure,
    partial_trace,
    random_density_matrix,
    random_pure_state,
    trace_distance,
)

logger = logging.getLogger(__name__)

DEGENERACY_TOL = 1e-8
GROUND_FIDELITY_TOL = 1e-8

CLOSE = "close"
WITNESSED = "witnessed"
BOUND_VIOLATION = "BOUND-VIOLATION"
VERDICTS = (CLOSE, WITNESSED, BOUND_VIOLATION)


@dataclass(frozen=True, eq=False)
class HamiltonianTerm:
    """Hermitian operator on ``support`` with ``0 <= H_s <= I_s``."""

    support: QubitSubset
    matrix: np.ndarray

    def __post_init__(self):
        support = as_subset(self.support)
        matrix = np.array(self.matrix, dtype=complex)
        dim = 2 ** len(support)
        if matrix.shape != (dim, dim):
            raise DimensionError(f"term on {support.label} has shape {matrix.shape}, expected ({dim}, {dim})")
        if np.max(np.abs(matrix - matrix.conj().T)) > SPECTRAL_TOL:
            raise InvalidStateError(f"term on {support.label} is not Hermitian")
        values = np.linalg.eigvalsh(matrix)
        if values[0] < -SPECTRAL_TOL or values[-1] > 1 + SPECTRAL_TOL:
            raise InvalidStateError(
                f"term on {support.label} has spectrum [{values[0]:.3e}, {values[-1]:.3e}] outside [0, 1]"
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "matrix", matrix)

    def is_projector(self, tol: float = SPECTRAL_TOL) -> bool:
        return bool(np.linalg.norm(self.matrix @ self.matrix - self.matrix) <= tol)


@dataclass(frozen=True, eq=False)
class LocalHamiltonian:
    """``H = sum_s H_s (x) I`` with an optional ``(lambda0, lambda1)`` certificate."""

    n_qubits: int
    terms: Tuple[HamiltonianTerm, ...] = ()
    certificate: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        n = check_qubit_count(self.n_qubits)
        terms = tuple(self.terms)
        for term in terms:
            term.support.check_range(n)
        object.__setattr__(self, "terms", terms)

    @property
    def locality(self) -> int:
        return max((len(t.support) for t in self.terms), default=0)

    @property
    def supports(self) -> List[QubitSubset]:
        return [t.support for t in self.terms]

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True, eq=False)
class GroundAnalysis:
    """Two lowest eigenvalues and the ground space of an assembled Hamiltonian."""

    lambda0: float
    lambda1: float
    gap: float
    ground_dimension: int
    unique: bool
    ground_state: Optional[PureState] = None

    def to_dict(self) -> Dict:
        return {
            "lambda0": self.lambda0,
            "lambda1": self.lambda1,
            "gap": self.gap,
            "ground_dimension": self.ground_dimension,
            "unique": self.unique,
        }


@dataclass(frozen=True)
class FingerprintVerdict:
    """Outcome of the robust fingerprint check.

    ``status`` is ``close`` when the full trace distance is below epsilon,
    ``witnessed`` when some term support shows a marginal deviation above
    ``threshold``, and ``BOUND-VIOLATION`` otherwise.
    """

    status: str
    distance: float
    threshold: float
    support: Optional[QubitSubset] = None
    deviation: Optional[float] = None

    def to_dict(self) -> Dict:
        return {
            "status": self.status,
            "distance": self.distance,
            "threshold": self.threshold,
            "support": list(self.support.indices) if self.support is not None else None,
            "deviation": self.deviation,
        }


def _merged_term(circuit: LayeredCircuit, cone: QubitSubset, members: Sequence[int]) -> HamiltonianTerm:
    local = {q: i for i, q in enumerate(cone)}
    size = len(cone)
    zero = np.zeros((2 ** len(members), 2 ** len(members)), dtype=complex)
    zero[0, 0] = 1.0
    term = np.eye(2 ** size, dtype=complex) - embed_operator(zero, [local[q] for q in members], size)
    for _, gate in circuit.gates():
        a, b = gate.qubits
        # gates reaching outside the cone never touch the evolving support
        if a in local and b in local:
            term = conjugate_local(gate.unitary, (local[a], local[b]), term, size)
    return HamiltonianTerm(cone, (term + term.conj().T) / 2)


def parent_hamiltonian(circuit: LayeredCircuit, threads: int = 1) -> LocalHamiltonian:
    """Merged parent Hamiltonian of ``U |0...0>``; one projector per light-cone class.

    Raises:
        CircuitError: If the circuit is invalid
        DimensionError: If the circuit is too large for dense simulation
    """
    report = validate(circuit)
    if not report:
        raise CircuitError(f"invalid circuit: {report}")
    n = check_qubit_count(circuit.n_qubits)

    classes: Dict[QubitSubset, List[int]] = {}
    for q in range(n):
        classes.setdefault(light_cone(circuit, q).support, []).append(q)
    items = list(classes.items())

    def build(item):
        cone, members = item
        return _merged_term(circuit, cone, members)

    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            terms = list(pool.map(build, items))
    else:
        terms = [build(item) for item in items]
    logger.debug("parent Hamiltonian: %d qubits, %d terms, locality %d", n, len(terms),
                 max(len(t.support) for t in terms))
    return LocalHamiltonian(n, tuple(terms))


def assemble(h: LocalHamiltonian) -> HermitianOperator:
    """Dense ``2**n`` matrix of ``h``."""
    n = h.n_qubits
    if n > MAX_QUBITS:
        raise DimensionError(f"n_qubits={n} exceeds the dense limit of {MAX_QUBITS}")
    dim = 2 ** n
    total = np.zeros((dim, dim), dtype=complex)
    for term in h.terms:
        total += embed_operator(term.matrix, term.support, n)
    return HermitianOperator._trusted(n, total)


def ground_analysis(h: LocalHamiltonian) -> GroundAnalysis:
    """Exact diagonalization of the assembled Hamiltonian."""
    values, vectors = np.linalg.eigh(assemble(h).matrix)
    lambda0, lambda1 = float(values[0]), float(values[1])
    gap = max(0.0, lambda1 - lambda0)
    dimension = int(np.sum(values - lambda0 <= DEGENERACY_TOL))
    unique = gap > DEGENERACY_TOL
    ground = None
    if unique:
        vec = vectors[:, 0]
        pivot = vec[np.argmax(np.abs(vec))]
        ground = PureState(h.n_qubits, vec * (abs(pivot) / pivot) / np.linalg.norm(vec))
    return GroundAnalysis(lambda0, lambda1, gap, dimension, unique, ground)


def fingerprint_check(
    h: LocalHamiltonian,
    psi: PureState,
    rho: StateLike,
    epsilon: float,
    analysis: Optional[GroundAnalysis] = None,
) -> FingerprintVerdict:
    """Either ``||psi - rho||_1 < epsilon`` or some term marginal deviates by more than ``gap eps^2 / 4m``.

    Ties between equally deviating supports go to the lexicographically
    smallest one.

    Raises:
        NotUniqueGroundStateError: If ``psi`` is not the unique ground state of ``h``
    """
    analysis = analysis or ground_analysis(h)
    if not analysis.unique:
        raise NotUniqueGroundStateError(
            f"Hamiltonian ground space has dimension {analysis.ground_dimension} (gap {analysis.gap:.3e})"
        )
    overlap = fidelity_pure(psi, analysis.ground_state)
    if overlap < 1 - GROUND_FIDELITY_TOL:
        raise NotUniqueGroundStateError(f"state has fidelity {overlap:.10f} with the unique ground state")

    threshold = analysis.gap * epsilon ** 2 / (4 * len(h.terms))
    distance = trace_distance(psi, rho)
    if distance < epsilon:
        return FingerprintVerdict(CLOSE, distance, threshold)

    best_support, best_deviation = None, -1.0
    for support in sorted(set(h.supports), key=lambda s: s.indices):
        deviation = trace_distance(partial_trace(psi, support), partial_trace(rho, support))
        if deviation > best_deviation:
            best_support, best_deviation = support, deviation
    if best_deviation > threshold:
        return FingerprintVerdict(WITNESSED, distance, threshold, best_support, best_deviation)
    logger.error(
        "fingerprint bound violated: distance %.6f >= %.3f but max marginal deviation %.3e <= %.3e",
        distance, epsilon, best_deviation, threshold,
    )
    return FingerprintVerdict(BOUND_VIOLATION, distance, threshold, best_support, best_deviation)


def fingerprint_trials(
    h: LocalHamiltonian,
    psi: PureState,
    epsilons: Sequence[float],
    trials: int,
    seed: int = 0,
) -> Dict[float, Dict[str, int]]:
    """Tally fingerprint verdicts over random states for each epsilon.

    Trials cycle through Haar-random pure states, random mixed states of random
    rank, and mixtures ``(1 - t) psi + t sigma`` that land near ``psi``.
    """
    analysis = ground_analysis(h)
    rng = np.random.default_rng(seed)
    n = psi.n_qubits
    psi_matrix = psi.density().matrix
    tallies = {float(e): {v: 0 for v in VERDICTS} for e in epsilons}
    for trial in range(trials):
        kind = trial % 3
        if kind == 0:
            rho = random_pure_state(n, rng)
        elif kind == 1:
            rho = random_density_matrix(n, int(rng.integers(1, 2 ** n + 1)), rng)
        else:
            t = float(rng.uniform()) ** 2
            sigma = random_density_matrix(n, None, rng).matrix
            rho = DensityMatrix._trusted(n, (1 - t) * psi_matrix + t * sigma)
        for epsilon in tallies:
            verdict = fingerprint_check(h, psi, rho, epsilon, analysis)
            tallies[epsilon][verdict.status] += 1
    return tallies
