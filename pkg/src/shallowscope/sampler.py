"""Born-rule simulation of Pauli-basis measurement schedules.

Shots are stored column-wise: ``bases[i, q]`` is the Pauli code (1=X, 2=Y,
3=Z) measured on qubit ``q`` in shot ``i`` and ``outcomes[i, q]`` is the bit,
0 for the +1 eigenvalue and 1 for -1.

Randomness is counter based. Shot chunk ``c`` (of :data:`CHUNK_SHOTS` shots)
draws its uniforms from a Philox generator keyed by ``(seed, c)``, so the
records do not depend on the number of worker threads.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from shallowscope.circuit.gates import HADAMARD
from shallowscope.exceptions import BudgetExceededError, DimensionError, InvalidStateError
from shallowscope.qcore import (
    PureState,
    QubitSubset,
    StateLike,
    SubsetLike,
    as_subset,
    apply_local,
    check_qubit_count,
)

logger = logging.getLogger(__name__)

BASIS_LETTERS = "XYZ"
CHUNK_SHOTS = 8192
PROBABILITY_CLIP = 1e-12
DEFAULT_MAX_SHOTS = 50_000_000

_S_DAGGER = np.diag([1, -1j])
# Rotations mapping the +1/-1 eigenvectors of X, Y, Z onto |0>, |1>.
_ROTATIONS = {
    1: HADAMARD,
    2: HADAMARD @ _S_DAGGER,
    3: None,
}


def basis_codes(letters: str) -> np.ndarray:
    """``"XYZ"`` -> ``array([1, 2, 3], dtype=uint8)``."""
    letters = str(letters).upper()
    if not letters or set(letters) - set(BASIS_LETTERS):
        raise ValueError(f"basis string must be a nonempty word over XYZ, got {letters!r}")
    return np.array([BASIS_LETTERS.index(c) + 1 for c in letters], dtype=np.uint8)


def basis_letters(codes: Iterable[int]) -> str:
    return "".join(BASIS_LETTERS[int(c) - 1] for c in codes)


def _bits(bits: Iterable[int]) -> str:
    return "".join(str(int(b)) for b in bits)


@dataclass(frozen=True)
class MeasurementRecord:
    """One shot: the measured basis word and the outcome bit string."""

    basis: str
    outcome: str

    def __post_init__(self):
        basis = str(self.basis).upper()
        basis_codes(basis)
        if set(self.outcome) - {"0", "1"}:
            raise ValueError(f"outcome must be a bit string, got {self.outcome!r}")
        if len(self.outcome) != len(basis):
            raise ValueError(f"outcome {self.outcome!r} does not match basis {basis!r}")
        object.__setattr__(self, "basis", basis)

    @property
    def n_qubits(self) -> int:
        return len(self.basis)


@dataclass(frozen=True, eq=False)
class Schedule:
    """Ordered list of basis words to measure, one per shot."""

    kind: str
    n_qubits: int
    bases: np.ndarray
    repetitions: int
    seed: Optional[int] = None

    def __post_init__(self):
        bases = np.array(self.bases, dtype=np.uint8).reshape(-1, self.n_qubits)
        bases.setflags(write=False)
        object.__setattr__(self, "bases", bases)

    def __len__(self) -> int:
        return self.bases.shape[0]

    def basis_strings(self) -> List[str]:
        return [basis_letters(row) for row in self.bases]

    def descriptor(self) -> Dict:
        """JSON-friendly description stored alongside the shots."""
        info = {"kind": self.kind, "n": self.n_qubits, "repetitions": self.repetitions, "shots": len(self)}
        if self.seed is not None:
            info["seed"] = int(self.seed)
        if self.kind == "fixed" and len(self):
            info["basis"] = basis_letters(self.bases[0])
        return info


class ShotStore:
    """Append-only column store of measurement records.

    Args:
        n_qubits: Register size shared by every record
        seed: Seed the shots were drawn with
        schedule: Descriptor of the schedule that produced them
    """

    def __init__(self, n_qubits: int, seed: Optional[int] = None, schedule: Optional[Dict] = None):
        self.n_qubits = int(n_qubits)
        self.seed = seed
        self.schedule = dict(schedule or {})
        self._bases: List[np.ndarray] = []
        self._outcomes: List[np.ndarray] = []
        self._sealed = False
        self._cache: Optional[Tuple[np.ndarray, np.ndarray]] = None

    @classmethod
    def from_records(cls, records: Iterable[MeasurementRecord], n_qubits: Optional[int] = None, **meta) -> "ShotStore":
        records = list(records)
        if n_qubits is None:
            if not records:
                raise ValueError("cannot infer n_qubits from an empty record list")
            n_qubits = records[0].n_qubits
        store = cls(n_qubits, **meta)
        if records:
            store.append(
                np.array([basis_codes(r.basis) for r in records], dtype=np.uint8),
                np.array([[int(b) for b in r.outcome] for r in records], dtype=np.uint8),
            )
        return store.seal()

    @property
    def sealed(self) -> bool:
        return self._sealed

    def append(self, bases: np.ndarray, outcomes: np.ndarray) -> None:
        """Add a block of shots.

        Raises:
            RuntimeError: If the store is sealed
            DimensionError: If the block width differs from ``n_qubits``
        """
        if self._sealed:
            raise RuntimeError("ShotStore is sealed; no more records can be appended")
        bases = np.asarray(bases, dtype=np.uint8)
        outcomes = np.asarray(outcomes, dtype=np.uint8)
        if bases.ndim != 2 or bases.shape[1] != self.n_qubits or bases.shape != outcomes.shape:
            raise DimensionError(
                f"record block shapes {bases.shape}/{outcomes.shape} do not match {self.n_qubits} qubits"
            )
        self._bases.append(bases)
        self._outcomes.append(outcomes)
        self._cache = None

    def seal(self) -> "ShotStore":
        self._sealed = True
        return self

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Read-only ``(bases, outcomes)`` arrays of shape ``(shots, n)``."""
        if self._cache is None:
            empty = np.zeros((0, self.n_qubits), dtype=np.uint8)
            bases = np.concatenate(self._bases) if self._bases else empty
            outcomes = np.concatenate(self._outcomes) if self._outcomes else empty.copy()
            bases.setflags(write=False)
            outcomes.setflags(write=False)
            self._cache = (bases, outcomes)
        return self._cache

    def records(self) -> Iterator[MeasurementRecord]:
        bases, outcomes = self.arrays()
        for b, o in zip(bases, outcomes):
            yield MeasurementRecord(basis_letters(b), _bits(o))

    def __len__(self) -> int:
        return sum(block.shape[0] for block in self._bases)


RecordSource = Union[ShotStore, Iterable[MeasurementRecord]]


def as_arrays(records: RecordSource) -> Tuple[int, np.ndarray, np.ndarray]:
    """``(n_qubits, bases, outcomes)`` for a store or an iterable of records."""
    store = records if isinstance(records, ShotStore) else ShotStore.from_records(records)
    bases, outcomes = store.arrays()
    return store.n_qubits, bases, outcomes


# ---------------------------------------------------------------------------
# Distributions and sampling
# ---------------------------------------------------------------------------


def _rotated(state: StateLike, codes: np.ndarray) -> np.ndarray:
    n = state.n_qubits
    if isinstance(state, PureState):
        vec = np.array(state.amplitudes)
        for q, code in enumerate(codes):
            if _ROTATIONS[int(code)] is not None:
                vec = apply_local(_ROTATIONS[int(code)], [q], vec, n)
        return np.abs(vec) ** 2

    # diag(W rho W^dagger): rotate the columns, then the rows of the conjugate
    left = np.array(state.matrix)
    for q, code in enumerate(codes):
        if _ROTATIONS[int(code)] is not None:
            left = apply_local(_ROTATIONS[int(code)], [q], left, n)
    right = left.conj().T
    for q, code in enumerate(codes):
        if _ROTATIONS[int(code)] is not None:
            right = apply_local(_ROTATIONS[int(code)], [q], right, n)
    return np.diagonal(right).real.copy()


def outcome_distribution(state: StateLike, basis: Union[str, np.ndarray]) -> np.ndarray:
    """Probability of each outcome bit string (qubit 0 most significant).

    Raises:
        DimensionError: If the basis and the state differ in size
        InvalidStateError: If a probability is below -1e-12
    """
    codes = basis_codes(basis) if isinstance(basis, str) else np.asarray(basis, dtype=np.uint8)
    if len(codes) != state.n_qubits:
        raise DimensionError(f"basis on {len(codes)} qubits, state on {state.n_qubits}")
    probs = _rotated(state, codes)
    if probs.min() < -PROBABILITY_CLIP:
        raise InvalidStateError(f"negative outcome probability {probs.min():.3e}; input is not a valid state")
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def _cdf(probs: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    # outcomes past the last nonzero entry must stay unreachable
    last = int(np.flatnonzero(probs)[-1])
    cdf[last:] = 1.0
    return cdf


def _chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(int(chunk),))))


def run_schedule(
    state: StateLike,
    schedule: Schedule,
    seed: int = 0,
    threads: int = 1,
    max_shots: int = DEFAULT_MAX_SHOTS,
) -> ShotStore:
    """Measure ``state`` once per schedule entry and return a sealed store.

    Raises:
        BudgetExceededError: If the schedule is longer than ``max_shots``
        DimensionError: If the schedule and the state differ in size
    """
    n = state.n_qubits
    if schedule.n_qubits != n:
        raise DimensionError(f"schedule on {schedule.n_qubits} qubits, state on {n}")
    if len(schedule) > max_shots:
        raise BudgetExceededError(f"schedule has {len(schedule)} shots, budget is {max_shots}")

    @lru_cache(maxsize=4096)
    def cdf_for(key: bytes) -> np.ndarray:
        return _cdf(outcome_distribution(state, np.frombuffer(key, dtype=np.uint8)))

    shifts = np.arange(n - 1, -1, -1)

    def draw(chunk: int) -> np.ndarray:
        bases = schedule.bases[chunk * CHUNK_SHOTS:(chunk + 1) * CHUNK_SHOTS]
        uniforms = _chunk_generator(seed, chunk).random(len(bases))
        unique, inverse = np.unique(bases, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        index = np.empty(len(bases), dtype=np.int64)
        for u, row in enumerate(unique):
            mask = inverse == u
            index[mask] = np.searchsorted(cdf_for(row.tobytes()), uniforms[mask], side="right")
        return ((index[:, None] >> shifts) & 1).astype(np.uint8)

    n_chunks = -(-len(schedule) // CHUNK_SHOTS)
    if threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(draw, range(n_chunks)))
    else:
        blocks = [draw(chunk) for chunk in range(n_chunks)]

    store = ShotStore(n, seed=seed, schedule=schedule.descriptor())
    if blocks:
        store.append(schedule.bases, np.concatenate(blocks))
    logger.debug("drew %d shots in %d chunks (%d threads)", len(schedule), n_chunks, threads)
    return store.seal()


def sample(state: StateLike, basis: str, shots: int, seed: int = 0) -> List[MeasurementRecord]:
    """``shots`` i.i.d. measurements of ``state`` in a single basis."""
    if shots < 1:
        raise ValueError(f"shots must be at least 1, got {shots}")
    codes = basis_codes(basis)
    if len(codes) != state.n_qubits:
        raise DimensionError(f"basis on {len(codes)} qubits, state on {state.n_qubits}")
    schedule = Schedule("fixed", state.n_qubits, np.tile(codes, (shots, 1)), repetitions=shots)
    return list(run_schedule(state, schedule, seed=seed).records())


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------


def all_bases(n_qubits: int) -> np.ndarray:
    """All ``3**n`` basis words as code rows, in lexicographic order."""
    index = np.arange(3 ** n_qubits)
    powers = 3 ** np.arange(n_qubits - 1, -1, -1)
    return ((index[:, None] // powers) % 3 + 1).astype(np.uint8)


def exhaustive_schedule(n_qubits: int, repetitions: int, max_shots: int = DEFAULT_MAX_SHOTS) -> Schedule:
    """Every basis word ``repetitions`` times in a row, words in lexicographic order.

    Example:
        >>> exhaustive_schedule(1, 2).basis_strings()
        ['X', 'X', 'Y', 'Y', 'Z', 'Z']

    Raises:
        BudgetExceededError: If ``repetitions * 3**n`` exceeds ``max_shots``
    """
    n = check_qubit_count(n_qubits)
    if repetitions < 1:
        raise ValueError(f"repetitions must be at least 1, got {repetitions}")
    total = repetitions * 3 ** n
    if total > max_shots:
        raise BudgetExceededError(
            f"exhaustive schedule needs {repetitions} x 3^{n} = {total} shots, budget is {max_shots}"
        )
    return Schedule("exhaustive", n, np.repeat(all_bases(n), repetitions, axis=0), repetitions)


def random_schedule(n_qubits: int, repetitions: int, seed: Optional[int] = None) -> Schedule:
    """``repetitions`` words with each letter uniform over {X, Y, Z}."""
    n = check_qubit_count(n_qubits)
    if repetitions < 1:
        raise ValueError(f"repetitions must be at least 1, got {repetitions}")
    rng = np.random.default_rng(seed)
    bases = rng.integers(1, 4, size=(repetitions, n), dtype=np.uint8)
    return Schedule("random", n, bases, repetitions, seed)


def restrict_record(record: MeasurementRecord, subset: SubsetLike) -> Tuple[str, str]:
    """Project a record onto ``subset``: ``(sub_basis, sub_outcome)``.

    Raises:
        DimensionError: If the subset does not fit the record
    """
    subset: QubitSubset = as_subset(subset).check_range(record.n_qubits)
    return (
        "".join(record.basis[q] for q in subset),
        "".join(record.outcome[q] for q in subset),
    )
