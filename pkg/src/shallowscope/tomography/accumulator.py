"""Signed Pauli sums with cross-weight sample reuse.

A shot measured in basis ``P`` is a sample of ``Tr(rho Q)`` for every ``Q``
that agrees with ``P`` wherever ``Q`` is not the identity. Its value is the
product of the +/-1 outcome signs on the support of ``Q``.

Shots are grouped into a joint histogram over (basis word, outcome). One
Walsh-Hadamard transform of each basis row then yields the signed sums of all
``2**k`` support masks at once, which are scattered onto base-4 Pauli codes.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import hadamard

from shallowscope.exceptions import DimensionError, InsufficientDataError, ScheduleMismatchError
from shallowscope.qcore import PauliString, StateLike, as_matrix, pauli_coefficients, pauli_weights
from shallowscope.sampler import CHUNK_SHOTS, RecordSource, as_arrays

logger = logging.getLogger(__name__)

FULL_STATE_MAX_QUBITS = 8


@dataclass(frozen=True, eq=False)
class PauliAccumulator:
    """Per-Pauli sample counts and signed sums over ``k`` qubits.

    Attributes:
        n_qubits: Number of qubits the codes range over
        mu: Signed sums, indexed by base-4 Pauli code (exact integers in float64)
        counts: Number of samples interpretable for each code
        buckets: Shots per measured basis word, in lexicographic word order
        repetitions: ``m`` of the exhaustive schedule, when known
    """

    n_qubits: int
    mu: np.ndarray
    counts: np.ndarray
    buckets: Optional[np.ndarray] = None
    repetitions: Optional[int] = None

    def __post_init__(self):
        size = 4 ** self.n_qubits
        if self.mu.shape != (size,) or self.counts.shape != (size,):
            raise DimensionError(f"accumulator arrays must have length {size}")
        for array in (self.mu, self.counts, self.buckets):
            if array is not None:
                array.setflags(write=False)

    @classmethod
    def from_state(cls, state: StateLike) -> "PauliAccumulator":
        """Infinite-sample limit: every count 1 and ``mu`` the exact expectation."""
        mu = pauli_coefficients(as_matrix(state), state.n_qubits)
        return cls(state.n_qubits, mu, np.ones(4 ** state.n_qubits, dtype=np.int64))

    @property
    def complete(self) -> bool:
        return bool(np.all(self.counts > 0))

    def missing(self) -> Optional[PauliString]:
        """First Pauli string with no samples, or ``None``."""
        empty = np.flatnonzero(self.counts == 0)
        return PauliString.from_code(int(empty[0]), self.n_qubits) if len(empty) else None

    def expectations(self) -> np.ndarray:
        """``mu / counts``; raises if any Pauli string has no samples."""
        missing = self.missing()
        if missing is not None:
            raise InsufficientDataError(f"no samples for Pauli string {missing}")
        return self.mu / self.counts

    def count_for(self, pauli) -> int:
        return int(self.counts[PauliString(str(pauli)).code])

    def mu_for(self, pauli) -> float:
        return float(self.mu[PauliString(str(pauli)).code])

    def merge(self, other: "PauliAccumulator") -> "PauliAccumulator":
        if other.n_qubits != self.n_qubits:
            raise DimensionError(f"cannot merge accumulators on {self.n_qubits} and {other.n_qubits} qubits")
        buckets = None
        if self.buckets is not None and other.buckets is not None:
            buckets = self.buckets + other.buckets
        return PauliAccumulator(self.n_qubits, self.mu + other.mu, self.counts + other.counts, buckets)


def _code_table(k: int) -> np.ndarray:
    """``table[b, mask]`` is the Pauli code of basis word ``b`` restricted to ``mask``."""
    words = ((np.arange(3 ** k)[:, None] // 3 ** np.arange(k - 1, -1, -1)) % 3 + 1).astype(np.int64)
    masks = (np.arange(2 ** k)[:, None] >> np.arange(k - 1, -1, -1)) & 1
    powers = 4 ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return np.einsum("bi,mi,i->bm", words, masks, powers)


def _balanced_selection(basis_index: np.ndarray, n_words: int) -> np.ndarray:
    """Keep the first ``min bucket`` shots of every basis word, in record order."""
    sizes = np.bincount(basis_index, minlength=n_words)
    order = np.argsort(basis_index, kind="stable")
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    rank = np.empty(len(basis_index), dtype=np.int64)
    rank[order] = np.arange(len(basis_index)) - starts[basis_index[order]]
    return rank < sizes.min()


def accumulate_arrays(
    bases: np.ndarray,
    outcomes: np.ndarray,
    balanced: bool = False,
    threads: int = 1,
) -> PauliAccumulator:
    """Accumulate shots given as ``(shots, k)`` code and bit arrays.

    With ``balanced=True`` every basis bucket is truncated to the smallest
    bucket, so each Pauli string is estimated from equally many shots per word.
    """
    bases = np.asarray(bases, dtype=np.int64)
    outcomes = np.asarray(outcomes, dtype=np.int64)
    k = bases.shape[1]
    n_words, n_outcomes = 3 ** k, 2 ** k

    basis_index = (bases - 1) @ (3 ** np.arange(k - 1, -1, -1, dtype=np.int64))
    outcome_index = outcomes @ (2 ** np.arange(k - 1, -1, -1, dtype=np.int64))
    joint = basis_index * n_outcomes + outcome_index
    if balanced and len(joint):
        joint = joint[_balanced_selection(basis_index, n_words)]

    def count(chunk: int) -> np.ndarray:
        part = joint[chunk * CHUNK_SHOTS:(chunk + 1) * CHUNK_SHOTS]
        return np.bincount(part, minlength=n_words * n_outcomes)

    n_chunks = max(1, -(-len(joint) // CHUNK_SHOTS))
    if threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(count, range(n_chunks)))
    else:
        partials = [count(chunk) for chunk in range(n_chunks)]
    histogram = np.sum(partials, axis=0).reshape(n_words, n_outcomes)

    signed = histogram @ hadamard(n_outcomes, dtype=np.int64)
    buckets = histogram.sum(axis=1)
    table = _code_table(k).ravel()

    mu = np.zeros(4 ** k)
    counts = np.zeros(4 ** k, dtype=np.int64)
    np.add.at(mu, table, signed.ravel().astype(float))
    np.add.at(counts, table, np.repeat(buckets, n_outcomes))
    return PauliAccumulator(k, mu, counts, buckets)


def accumulate(records: RecordSource, threads: int = 1) -> PauliAccumulator:
    """Accumulate the records of an exhaustive schedule over all ``4**n`` Pauli strings.

    Raises:
        DimensionError: If n exceeds :data:`FULL_STATE_MAX_QUBITS`
        ScheduleMismatchError: If some weight-w string does not get exactly
            ``m * 3**(n - w)`` samples
    """
    n, bases, outcomes = as_arrays(records)
    if n > FULL_STATE_MAX_QUBITS:
        raise DimensionError(f"full-state tomography supports n <= {FULL_STATE_MAX_QUBITS}, got {n}")
    shots = bases.shape[0]
    repetitions, remainder = divmod(shots, 3 ** n)
    if repetitions == 0 or remainder:
        raise ScheduleMismatchError(f"{shots} shots is not a positive multiple of 3^{n}")

    acc = accumulate_arrays(bases, outcomes, threads=threads)
    expected = repetitions * 3 ** (n - pauli_weights(n))
    wrong = np.flatnonzero(acc.counts != expected)
    if len(wrong):
        code = int(wrong[0])
        raise ScheduleMismatchError(
            f"Pauli string {PauliString.from_code(code, n)} has {acc.counts[code]} samples, "
            f"expected {expected[code]} for an exhaustive schedule with m={repetitions}"
        )
    logger.debug("accumulated %d shots over %d Pauli strings (m=%d)", shots, 4 ** n, repetitions)
    return PauliAccumulator(n, acc.mu, acc.counts, acc.buckets, repetitions)


def restrict_arrays(bases: np.ndarray, outcomes: np.ndarray, subset) -> Tuple[np.ndarray, np.ndarray]:
    columns = list(subset)
    return bases[:, columns], outcomes[:, columns]
