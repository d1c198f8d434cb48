"""Search for states that share every marginal of a pure state but differ from it.

Every compatible state has zero weight on ``ker(rho_s) x I`` for each subset
``s``, so its range lies in the common null space of those projectors. The
search runs inside that subspace (the face), where the marginal constraints
become an exact affine set in orthonormal Hermitian coordinates. Faces too
large for that treatment fall back to Pauli-coordinate projections on the
whole register.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import null_space

from shallowscope.circuit.ghz import ghz_state
from shallowscope.exceptions import InvalidStateError
from shallowscope.qcore import (
    STRUCTURAL_TOL,
    DensityMatrix,
    PureState,
    embed_operator,
    operator_from_pauli_coefficients,
    partial_trace,
    pauli_coefficients,
    trace_distance,
)
from shallowscope.uda.kernel import MarginalMap, kernel_basis

logger = logging.getLogger(__name__)

NOT_UDA = "not-UDA"
NO_IMPOSTOR = "no-impostor-found"

RELAXATION = 1.5
MAX_ITERATIONS = 5000
CONVERGENCE_TOL = 1e-13
LINE_SEARCH_TOL = 1e-13
MARGINAL_TOL = 1e-10
WITNESS_MIN_DISTANCE = 1e-6
FACE_TOL = 1e-12
FACE_MAX_DIM = 16

_SQRT2 = np.sqrt(2.0)

_NO_WITNESS_CAVEAT = (
    "no witness found within the restart budget; this is evidence, not a proof, "
    "that the state is uniquely determined by these marginals"
)
_WITNESS_CAVEAT = "the witness is a validated state with identical marginals, so the state is not UDA"


@dataclass(frozen=True, eq=False)
class UdaVerdict:
    """Result of :func:`impostor_search`.

    ``witness`` is set only for ``not-UDA``. ``statistics`` records restart
    outcomes; ``caveat`` spells out what the verdict does and does not prove.
    """

    status: str
    witness: Optional[DensityMatrix] = None
    distance: Optional[float] = None
    statistics: Dict = field(default_factory=dict)
    caveat: str = ""

    def to_dict(self) -> Dict:
        return {
            "status": self.status,
            "distance": self.distance,
            "statistics": dict(self.statistics),
            "caveat": self.caveat,
        }


@dataclass(frozen=True)
class _RestartResult:
    iterations: int
    converged: bool
    witness: Optional[DensityMatrix]
    distance: float


def feasible_face(psi: PureState, marginal_map: MarginalMap) -> np.ndarray:
    """Orthonormal columns spanning the subspace every compatible state is supported on."""
    n, dim = psi.n_qubits, psi.dim
    blocker = np.zeros((dim, dim), dtype=complex)
    for subset in marginal_map.subsets:
        values, vectors = np.linalg.eigh(partial_trace(psi, subset).matrix)
        null = vectors[:, values <= FACE_TOL]
        if null.shape[1]:
            blocker += embed_operator(null @ null.conj().T, subset, n)
    values, vectors = np.linalg.eigh(blocker)
    return vectors[:, values <= FACE_TOL]


def _psd(matrix: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    return (vectors * np.clip(values, 0.0, None)) @ vectors.conj().T


class _FaceProjections:
    """PSD cone and marginal-compatible affine set on a face of dimension ``w``.

    Operators are ``w x w`` matrices in the face basis. Coordinates are taken
    in the orthonormal Hermitian basis (diagonal units, then scaled real and
    imaginary off-diagonal units), where the affine set is ``psi + span(null)``.
    """

    def __init__(self, psi: PureState, marginal_map: MarginalMap, basis: np.ndarray):
        self.n = psi.n_qubits
        self.basis = basis
        self.w = basis.shape[1]
        self._upper = np.triu_indices(self.w, 1)
        self.psi = basis.conj().T @ psi.density().matrix @ basis

        fixed = marginal_map.constrained()
        columns = []
        for index in range(self.w ** 2):
            unit = np.zeros(self.w ** 2)
            unit[index] = 1.0
            columns.append(pauli_coefficients(self.lift(self.from_vector(unit)), self.n)[fixed])
        self.null = null_space(np.column_stack(columns))
        self.origin = self.to_vector(self.psi)

    @property
    def kernel_dimension(self) -> int:
        return self.null.shape[1]

    def to_vector(self, matrix: np.ndarray) -> np.ndarray:
        upper = matrix[self._upper]
        return np.concatenate([np.diag(matrix).real, _SQRT2 * upper.real, _SQRT2 * upper.imag])

    def from_vector(self, vector: np.ndarray) -> np.ndarray:
        w = self.w
        pairs = len(self._upper[0])
        matrix = np.diag(vector[:w]).astype(complex)
        upper = (vector[w:w + pairs] + 1j * vector[w + pairs:]) / _SQRT2
        matrix[self._upper] = upper
        matrix[self._upper[::-1]] = upper.conj()
        return matrix

    def lift(self, matrix: np.ndarray) -> np.ndarray:
        return self.basis @ matrix @ self.basis.conj().T

    def affine(self, matrix: np.ndarray) -> np.ndarray:
        offset = self.to_vector(matrix) - self.origin
        return self.from_vector(self.origin + self.null @ (self.null.T @ offset))

    def kernel_part(self, matrix: np.ndarray) -> np.ndarray:
        return self.from_vector(self.null @ (self.null.T @ self.to_vector(matrix - self.psi)))

    def start(self, rng: np.random.Generator) -> np.ndarray:
        t = float(rng.uniform())
        start = (1 - t) * self.psi + t * np.eye(self.w) / self.w
        noise = self.null @ rng.normal(size=self.kernel_dimension)
        norm = np.linalg.norm(noise)
        if norm > 0:
            start = start + self.from_vector(noise * (t / (2 * norm)))
        return start


class _PauliProjections:
    """Same geometry on the whole register, in Pauli coordinates."""

    def __init__(self, psi: PureState, marginal_map: MarginalMap, kernel_dimension: int):
        self.n = psi.n_qubits
        self.w = psi.dim
        self.psi = psi.density().matrix
        self.fixed = marginal_map.constrained()
        self.target = pauli_coefficients(self.psi, self.n)
        self.kernel_dimension = kernel_dimension

    def lift(self, matrix: np.ndarray) -> np.ndarray:
        return matrix

    def affine(self, matrix: np.ndarray) -> np.ndarray:
        alpha = pauli_coefficients(matrix, self.n)
        correction = np.where(self.fixed, self.target - alpha, 0.0)
        return matrix + operator_from_pauli_coefficients(correction, self.n)

    def kernel_part(self, matrix: np.ndarray) -> np.ndarray:
        alpha = pauli_coefficients(matrix - self.psi, self.n)
        return operator_from_pauli_coefficients(np.where(self.fixed, 0.0, alpha), self.n)

    def start(self, rng: np.random.Generator) -> np.ndarray:
        t = float(rng.uniform())
        start = (1 - t) * self.psi + t * np.eye(self.w) / self.w
        noise = np.where(self.fixed, 0.0, rng.normal(size=4 ** self.n))
        norm = np.linalg.norm(noise)
        if norm > 0:
            start = start + operator_from_pauli_coefficients(noise * (t * np.sqrt(self.w) / (2 * norm)), self.n)
        return start


def _projections(psi: PureState, marginal_map: MarginalMap, kernel_dimension: int):
    basis = feasible_face(psi, marginal_map)
    if 0 < basis.shape[1] <= FACE_MAX_DIM:
        compressed = basis.conj().T @ psi.amplitudes
        if np.linalg.norm(basis @ compressed - psi.amplitudes) <= STRUCTURAL_TOL:
            return _FaceProjections(psi, marginal_map, basis)
    logger.debug("face of dimension %d not usable, searching the whole register", basis.shape[1])
    return _PauliProjections(psi, marginal_map, kernel_dimension)


def _min_eigenvalue(matrix: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(matrix)[0])


def _certify(projections, marginal_map: MarginalMap, psi: PureState, candidate: np.ndarray):
    """Turn a candidate into a validated witness, or return ``None``."""
    direction = projections.kernel_part(candidate)
    if np.linalg.norm(direction) <= CONVERGENCE_TOL:
        return None, 0.0

    # lambda_min(psi + s K) is concave in s, so the feasible s form an interval
    base = projections.psi
    if _min_eigenvalue(base + direction) >= -LINE_SEARCH_TOL:
        step = 1.0
    else:
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = (lo + hi) / 2
            if _min_eigenvalue(base + mid * direction) >= -LINE_SEARCH_TOL:
                lo = mid
            else:
                hi = mid
        step = lo
    if step == 0.0:
        return None, 0.0

    matrix = projections.lift(_psd(base + step * direction))
    matrix = matrix / np.trace(matrix).real
    try:
        witness = DensityMatrix(projections.n, matrix)
    except InvalidStateError:
        return None, 0.0
    distance = trace_distance(psi, witness)
    if distance <= WITNESS_MIN_DISTANCE or marginal_map.max_deviation(psi, witness) > MARGINAL_TOL:
        return None, distance
    return witness, distance


def _restart(psi: PureState, marginal_map: MarginalMap, projections, seed: int, index: int,
             max_iterations: int) -> _RestartResult:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    current = projections.start(rng)
    converged = False
    iteration = 0
    cone = _psd(current)
    for iteration in range(1, max_iterations + 1):
        cone = _psd(current)
        affine = projections.affine(cone)
        following = cone + RELAXATION * (affine - cone)
        change = np.linalg.norm(following - current)
        current = following
        if change < CONVERGENCE_TOL:
            cone = _psd(current)
            converged = True
            break

    witness, distance = _certify(projections, marginal_map, psi, cone)
    return _RestartResult(iteration, converged, witness, distance)


def impostor_search(
    psi: PureState,
    marginal_map: MarginalMap,
    restarts: int = 8,
    seed: int = 0,
    threads: int = 1,
    max_iterations: int = MAX_ITERATIONS,
) -> UdaVerdict:
    """Look for a state with the marginals of ``psi`` on ``marginal_map`` but far from ``psi``.

    The search is confined to the face of states supported where every target
    marginal allows. Each restart alternates over-relaxed projections between
    the PSD cone and the affine set of operators with the target marginals,
    starting from a random mixture of ``psi`` with the maximally mixed state
    pushed along the kernel. Candidates are certified along the segment from
    ``psi`` and fully re-validated before they are reported. The first witness
    by restart index wins.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be at least 1, got {restarts}")
    if marginal_map.n_qubits != psi.n_qubits:
        raise ValueError(f"marginal map on {marginal_map.n_qubits} qubits, state on {psi.n_qubits}")
    kernel = kernel_basis(marginal_map)
    statistics = {"restarts": restarts, "kernel_dimension": kernel.dimension}

    results: List[_RestartResult] = []
    if kernel.dimension > 0:
        projections = _projections(psi, marginal_map, kernel.dimension)
        statistics["face_dimension"] = projections.w
        statistics["face_kernel_dimension"] = projections.kernel_dimension
        if projections.kernel_dimension > 0:
            def run(index: int) -> _RestartResult:
                return _restart(psi, marginal_map, projections, seed, index, max_iterations)

            if threads > 1 and restarts > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    results = list(pool.map(run, range(restarts)))
            else:
                results = [run(index) for index in range(restarts)]

    statistics.update({
        "converged": sum(r.converged for r in results),
        "iterations": [r.iterations for r in results],
        "max_candidate_distance": max((r.distance for r in results), default=0.0),
    })
    not_converged = len(results) - statistics["converged"]
    if not_converged:
        logger.info("%d of %d restarts hit the %d-iteration cap", not_converged, restarts, max_iterations)

    for index, result in enumerate(results):
        if result.witness is not None:
            statistics["witness_restart"] = index
            return UdaVerdict(NOT_UDA, result.witness, result.distance, statistics, _WITNESS_CAVEAT)
    return UdaVerdict(NO_IMPOSTOR, None, None, statistics, _NO_WITNESS_CAVEAT)


def ghz_counterexample(n_qubits: int) -> Tuple[PureState, DensityMatrix]:
    """GHZ state and the classical mixture sharing all of its (n-1)-qubit marginals."""
    if n_qubits < 2:
        raise ValueError(f"the GHZ counterexample needs n >= 2, got {n_qubits}")
    psi = ghz_state(n_qubits)
    dim = psi.dim
    mixture = np.zeros((dim, dim), dtype=complex)
    mixture[0, 0] = mixture[-1, -1] = 0.5
    return psi, DensityMatrix._trusted(n_qubits, mixture)
