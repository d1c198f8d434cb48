"""Linear-inversion estimators, projections and overlapping tomography."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
from scipy.special import comb

from shallowscope.exceptions import DimensionError, InsufficientDataError, InvalidStateError
from shallowscope.qcore import (
    DensityMatrix,
    HermitianOperator,
    QubitSubset,
    StateLike,
    SubsetLike,
    as_subset,
    operator_from_pauli_coefficients,
    partial_trace,
    trace_distance,
)
from shallowscope.sampler import BASIS_LETTERS, RecordSource, as_arrays
from shallowscope.tomography.accumulator import PauliAccumulator, accumulate_arrays, restrict_arrays
from shallowscope.tomography.budget import TOMOGRAPHY_CONSTANT

logger = logging.getLogger(__name__)

TRACE_TOL = 1e-9


def estimate_state(acc: PauliAccumulator) -> HermitianOperator:
    """``sigma = sum_Q (mu_Q / count_Q) P_Q / 2**n``, unit trace but not necessarily PSD.

    Raises:
        InsufficientDataError: If some Pauli string has no samples
    """
    alpha = np.array(acc.expectations())
    alpha[0] = 1.0
    return HermitianOperator._trusted(acc.n_qubits, operator_from_pauli_coefficients(alpha, acc.n_qubits))


def _simplex_projection(values: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex."""
    ordered = np.sort(values)[::-1]
    cumulative = np.cumsum(ordered)
    ranks = np.arange(1, len(values) + 1)
    active = np.flatnonzero(ordered - (cumulative - 1) / ranks > 0)[-1]
    theta = (cumulative[active] - 1) / (active + 1)
    return np.maximum(values - theta, 0.0)


def project_psd(sigma: HermitianOperator) -> DensityMatrix:
    """Nearest trace-1 PSD matrix in Frobenius norm.

    Example:
        >>> out = project_psd(HermitianOperator(1, np.diag([1.2, -0.2])))
        >>> np.round(out.matrix.real, 12)
        array([[1., 0.],
               [0., 0.]])
    """
    values, vectors = np.linalg.eigh(sigma.matrix)
    projected = _simplex_projection(values)
    return DensityMatrix._trusted(sigma.n_qubits, (vectors * projected) @ vectors.conj().T)


def project_rank_r(sigma: HermitianOperator, rank: int) -> HermitianOperator:
    """Best rank-``rank`` Frobenius approximation: keep the largest-magnitude eigenvalues."""
    dim = sigma.dim
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    values, vectors = np.linalg.eigh(sigma.matrix)
    keep = np.argsort(-np.abs(values), kind="stable")[:rank]
    kept = vectors[:, keep]
    return HermitianOperator._trusted(sigma.n_qubits, (kept * values[keep]) @ kept.conj().T)


def empirical_distribution(samples: Sequence[Union[int, str]], alphabet_size: Optional[int] = None) -> np.ndarray:
    """Frequency vector of samples drawn from ``{0, ..., alphabet_size - 1}``.

    Bit-string samples are read as binary numbers, and their length fixes the
    default alphabet size.
    """
    if len(samples) == 0:
        raise ValueError("empirical distribution of an empty sample list")
    if isinstance(samples[0], str):
        if alphabet_size is None:
            alphabet_size = 2 ** len(samples[0])
        samples = [int(s, 2) for s in samples]
    values = np.asarray(samples, dtype=np.int64)
    if values.min() < 0:
        raise ValueError("samples must be nonnegative integers")
    counts = np.bincount(values, minlength=alphabet_size or 0)
    return counts / len(values)


def bucket_threshold(n_qubits: int, k: int, epsilon: float, delta: float) -> float:
    """Shots per basis word that a k-subset needs for precision ``epsilon``."""
    return (
        TOMOGRAPHY_CONSTANT * 10 ** k * math.log(2 * comb(n_qubits, k, exact=True) / delta)
        / (3 ** k * epsilon ** 2)
    )


@dataclass(frozen=True, eq=False)
class MarginalEstimateSet:
    """Estimated reduced operators keyed by qubit subset.

    Attributes:
        n_qubits: Size of the measured register
        k: Marginal size
        estimates: Subset -> unit-trace Hermitian estimate
        repetitions: Number of measurement rounds used
        epsilon: Target precision, when known
        delta: Target failure probability, when known
        diagnostics: Subset label -> per-bucket count summary
    """

    n_qubits: int
    k: int
    estimates: Dict[QubitSubset, HermitianOperator]
    repetitions: int = 0
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    diagnostics: Dict[str, Dict] = field(default_factory=dict)

    def __post_init__(self):
        for subset, estimate in self.estimates.items():
            if abs(estimate.trace - 1.0) > TRACE_TOL:
                raise InvalidStateError(f"estimate on {subset.label} has trace {estimate.trace!r}")

    @classmethod
    def from_exact(cls, state: StateLike, k: int, subsets: Optional[Iterable[SubsetLike]] = None) -> "MarginalEstimateSet":
        """Exact marginals of ``state``, as if measured with infinitely many shots."""
        chosen = _subsets(state.n_qubits, k, subsets)
        estimates = {s: partial_trace(state, s) for s in chosen}
        return cls(state.n_qubits, k, estimates)

    def __getitem__(self, subset: SubsetLike) -> HermitianOperator:
        return self.estimates[as_subset(subset)]

    def __contains__(self, subset: SubsetLike) -> bool:
        return as_subset(subset) in self.estimates

    def __len__(self) -> int:
        return len(self.estimates)

    def subsets(self) -> List[QubitSubset]:
        return sorted(self.estimates, key=lambda s: s.indices)

    def missing_subsets(self, k: Optional[int] = None) -> List[QubitSubset]:
        """k-subsets of the register with no estimate."""
        k = self.k if k is None else k
        return [s for s in _subsets(self.n_qubits, k, None) if s not in self.estimates]

    def distances_to(self, state: StateLike) -> Dict[str, float]:
        """Trace distance of every estimate to the exact marginal of ``state``."""
        return {
            s.label: trace_distance(self.estimates[s], partial_trace(state, s))
            for s in self.subsets()
        }


def _subsets(n: int, k: int, subsets: Optional[Iterable[SubsetLike]]) -> List[QubitSubset]:
    if subsets is None:
        if not 1 <= k <= n:
            raise ValueError(f"k must lie in [1, {n}], got {k}")
        return [QubitSubset(c) for c in combinations(range(n), k)]
    chosen = [as_subset(s).check_range(n) for s in subsets]
    for subset in chosen:
        if len(subset) != k:
            raise DimensionError(f"subset {subset.label} has {len(subset)} qubits, expected k={k}")
    return chosen


def overlapping_tomography(
    records: RecordSource,
    k: int,
    subsets: Optional[Iterable[SubsetLike]] = None,
    epsilon: Optional[float] = None,
    delta: Optional[float] = None,
    balanced: bool = False,
    threads: int = 1,
) -> MarginalEstimateSet:
    """Estimate every requested marginal from one shared set of random-basis shots.

    Each subset sees the records restricted to its qubits. A k-qubit Pauli
    string is estimated from all shots whose restricted word matches it on its
    support. ``subsets`` defaults to all ``C(n, k)`` subsets.

    Raises:
        InsufficientDataError: If some basis word was never measured on a subset
    """
    n, bases, outcomes = as_arrays(records)
    if not 1 <= k <= n:
        raise DimensionError(f"k must lie in [1, {n}], got {k}")
    chosen = _subsets(n, k, subsets)
    threshold = None
    if epsilon is not None and delta is not None:
        threshold = bucket_threshold(n, k, epsilon, delta)

    def estimate(subset: QubitSubset):
        sub_bases, sub_outcomes = restrict_arrays(bases, outcomes, subset)
        acc = accumulate_arrays(sub_bases, sub_outcomes, balanced=balanced)
        empty = np.flatnonzero(acc.buckets == 0)
        if len(empty):
            word = int(empty[0])
            letters = "".join(
                BASIS_LETTERS[(word // 3 ** (len(subset) - 1 - i)) % 3] for i in range(len(subset))
            )
            raise InsufficientDataError(f"subset {subset.label}: basis {letters} was never measured")
        return estimate_state(acc), int(acc.buckets.min())

    if threads > 1 and len(chosen) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(estimate, chosen))
    else:
        results = [estimate(s) for s in chosen]

    estimates = {}
    diagnostics = {}
    for subset, (sigma, min_bucket) in zip(chosen, results):
        estimates[subset] = sigma
        entry = {"min_bucket": min_bucket}
        if threshold is not None:
            entry["threshold"] = threshold
            entry["shortfall"] = min_bucket < threshold
            if min_bucket < threshold:
                logger.warning(
                    "subset %s: smallest basis bucket has %d shots, below the %.1f needed",
                    subset.label, min_bucket, threshold,
                )
        diagnostics[subset.label] = entry
    return MarginalEstimateSet(n, k, estimates, bases.shape[0], epsilon, delta, diagnostics)
