"""Unit tests for Pauli accumulation with cross-weight reuse."""

import numpy as np
import pytest

from shallowscope.exceptions import (
    DimensionError,
    InsufficientDataError,
    ScheduleMismatchError,
)
from shallowscope.qcore import PureState, pauli_expectation, random_pure_state
from shallowscope.sampler import (
    MeasurementRecord,
    ShotStore,
    exhaustive_schedule,
    run_schedule,
)
from shallowscope.tomography import PauliAccumulator, accumulate, accumulate_arrays


def _store(*pairs):
    return ShotStore.from_records([MeasurementRecord(b, o) for b, o in pairs])


class TestAccumulate:
    """Exhaustive-schedule accumulation."""

    def test_counts_follow_weight(self):
        store = run_schedule(PureState.basis("0"), exhaustive_schedule(1, 5), seed=0)
        acc = accumulate(store)
        assert acc.repetitions == 5
        assert acc.count_for("I") == 15
        assert acc.count_for("X") == 5
        assert acc.count_for("Z") == 5
        assert acc.mu_for("Z") == 5
        assert acc.mu_for("I") == 15

    def test_two_qubit_counts(self):
        store = run_schedule(PureState.basis("01"), exhaustive_schedule(2, 3), seed=1)
        acc = accumulate(store)
        assert acc.count_for("II") == 27
        assert acc.count_for("XI") == 9
        assert acc.count_for("ZY") == 3
        # Z on qubit 1 reads the bit 1 every time
        assert acc.mu_for("IZ") == -9
        assert acc.mu_for("ZZ") == -3

    def test_signed_sums_by_hand(self):
        acc = accumulate(_store(("X", "0"), ("Y", "1"), ("Z", "1")))
        assert acc.mu_for("X") == 1
        assert acc.mu_for("Y") == -1
        assert acc.mu_for("Z") == -1
        assert acc.mu_for("I") == 3

    def test_shot_count_not_multiple(self):
        with pytest.raises(ScheduleMismatchError):
            accumulate(_store(("X", "0"), ("Y", "0"), ("Z", "0"), ("Z", "1")))

    def test_non_exhaustive_schedule(self):
        with pytest.raises(ScheduleMismatchError):
            accumulate(_store(("X", "0"), ("X", "1"), ("Y", "0")))

    def test_register_too_large(self):
        with pytest.raises(DimensionError):
            accumulate(ShotStore(9).seal())

    def test_threads_agree(self):
        psi = random_pure_state(2, np.random.default_rng(2))
        store = run_schedule(psi, exhaustive_schedule(2, 2000), seed=3)
        serial = accumulate(store)
        parallel = accumulate(store, threads=4)
        assert np.array_equal(serial.mu, parallel.mu)
        assert np.array_equal(serial.counts, parallel.counts)


class TestAccumulateArrays:
    """Raw array accumulation, balancing and merging."""

    def test_missing_pauli(self):
        acc = accumulate_arrays(np.array([[1], [1]]), np.array([[0], [1]]))
        assert not acc.complete
        assert str(acc.missing()) == "Y"
        with pytest.raises(InsufficientDataError):
            acc.expectations()

    def test_balanced_truncates_to_smallest_bucket(self):
        bases = np.array([[1], [1], [1], [2], [3]])
        outcomes = np.array([[0], [0], [1], [1], [0]])
        acc = accumulate_arrays(bases, outcomes, balanced=True)
        assert acc.buckets.tolist() == [1, 1, 1]
        assert acc.count_for("I") == 3
        assert acc.mu_for("X") == 1

    def test_merge(self):
        a = accumulate_arrays(np.array([[1]]), np.array([[0]]))
        b = accumulate_arrays(np.array([[1]]), np.array([[1]]))
        merged = a.merge(b)
        assert merged.count_for("X") == 2
        assert merged.mu_for("X") == 0
        assert merged.buckets.tolist() == [2, 0, 0]

    def test_merge_size_mismatch(self):
        a = accumulate_arrays(np.array([[1]]), np.array([[0]]))
        b = accumulate_arrays(np.array([[1, 1]]), np.array([[0, 0]]))
        with pytest.raises(DimensionError):
            a.merge(b)

    def test_arrays_are_read_only(self):
        acc = accumulate_arrays(np.array([[3]]), np.array([[0]]))
        with pytest.raises(ValueError):
            acc.mu[0] = 2.0

    def test_from_state(self):
        psi = random_pure_state(2, np.random.default_rng(8))
        acc = PauliAccumulator.from_state(psi)
        assert acc.complete
        for label in ("XZ", "YY", "IZ"):
            assert acc.mu_for(label) == pytest.approx(pauli_expectation(psi, label))
