"""Unit tests for linear inversion, projections and overlapping tomography."""

import numpy as np
import pytest

from shallowscope.circuit import ghz_state
from shallowscope.exceptions import DimensionError, InsufficientDataError, InvalidStateError
from shallowscope.qcore import (
    HermitianOperator,
    PureState,
    QubitSubset,
    frobenius_distance,
    pauli_coefficients,
    random_density_matrix,
    random_pure_state,
    trace_distance,
)
from shallowscope.sampler import MeasurementRecord, ShotStore, exhaustive_schedule, random_schedule, run_schedule
from shallowscope.tomography import (
    MarginalEstimateSet,
    PauliAccumulator,
    accumulate,
    accumulate_arrays,
    bucket_threshold,
    empirical_distribution,
    estimate_state,
    overlapping_tomography,
    plan_budget,
    project_psd,
    project_rank_r,
)


@pytest.fixture(scope="module")
def ghz_shots():
    return run_schedule(ghz_state(4), random_schedule(4, 20000, seed=1), seed=2)


class TestLinearInversion:
    """Full-state estimates."""

    def test_exact_limit(self):
        rho = random_density_matrix(2, rng=np.random.default_rng(0))
        sigma = estimate_state(PauliAccumulator.from_state(rho))
        assert np.allclose(sigma.matrix, rho.matrix)

    def test_unit_trace_and_hermitian(self):
        psi = random_pure_state(2, np.random.default_rng(1))
        sigma = estimate_state(accumulate(run_schedule(psi, exhaustive_schedule(2, 20), seed=4)))
        assert sigma.trace == pytest.approx(1.0)
        assert np.allclose(sigma.matrix, sigma.matrix.conj().T)

    def test_converges(self):
        psi = random_pure_state(2, np.random.default_rng(5))
        store = run_schedule(psi, exhaustive_schedule(2, 4000), seed=6)
        rho_hat = project_psd(estimate_state(accumulate(store)))
        assert trace_distance(rho_hat, psi) < 0.15

    def test_missing_data(self):
        acc = accumulate_arrays(np.array([[1], [3]]), np.array([[0], [0]]))
        with pytest.raises(InsufficientDataError):
            estimate_state(acc)


class TestProjections:
    """PSD and rank-r projections."""

    def test_psd_clips_negative_eigenvalue(self):
        out = project_psd(HermitianOperator(1, np.diag([1.2, -0.2])))
        assert np.allclose(out.matrix, np.diag([1.0, 0.0]))

    def test_psd_leaves_states_alone(self):
        rho = random_density_matrix(2, rng=np.random.default_rng(3))
        assert np.allclose(project_psd(rho).matrix, rho.matrix)

    def test_psd_is_closest(self):
        rng = np.random.default_rng(9)
        rho = random_density_matrix(2, rng=rng)
        noise = rng.normal(size=(4, 4)) * 0.1
        noise = noise + noise.T
        noise -= np.trace(noise) * np.eye(4) / 4
        sigma = HermitianOperator(2, rho.matrix + noise)
        projected = project_psd(sigma)
        assert min(np.linalg.eigvalsh(projected.matrix)) >= -1e-12
        assert projected.trace == pytest.approx(1.0)
        assert frobenius_distance(projected, sigma) <= frobenius_distance(rho, sigma) + 1e-12

    def test_rank_r(self):
        sigma = HermitianOperator(2, np.diag([0.5, 0.3, 0.2, 0.0]))
        assert np.allclose(project_rank_r(sigma, 1).matrix, np.diag([0.5, 0, 0, 0]))
        assert np.allclose(project_rank_r(sigma, 4).matrix, sigma.matrix)

    def test_rank_r_keeps_largest_magnitude(self):
        sigma = HermitianOperator(1, np.diag([1.3, -0.3]))
        assert np.allclose(project_rank_r(sigma, 1).matrix, np.diag([1.3, 0]))

    def test_rank_out_of_range(self):
        with pytest.raises(ValueError):
            project_rank_r(HermitianOperator(1, np.eye(2) / 2), 3)


class TestEmpiricalDistribution:

    def test_bit_strings(self):
        assert empirical_distribution(["00", "11", "11", "01"]).tolist() == [0.25, 0.25, 0.0, 0.5]

    def test_integers(self):
        assert np.allclose(empirical_distribution([0, 2, 2], alphabet_size=4), [1 / 3, 0, 2 / 3, 0])

    def test_empty(self):
        with pytest.raises(ValueError):
            empirical_distribution([])


class TestMarginalEstimateSet:
    """Containers of reduced estimates."""

    def test_from_exact(self):
        estimates = MarginalEstimateSet.from_exact(ghz_state(3), 2)
        assert len(estimates) == 3
        assert (0, 2) in estimates
        assert np.allclose(estimates[(0, 1)].matrix, np.diag([0.5, 0, 0, 0.5]))
        assert max(estimates.distances_to(ghz_state(3)).values()) < 1e-12

    def test_missing_subsets(self):
        estimates = MarginalEstimateSet.from_exact(ghz_state(3), 2, subsets=[(0, 1)])
        assert estimates.missing_subsets() == [QubitSubset((0, 2)), QubitSubset((1, 2))]

    def test_rejects_non_unit_trace(self):
        with pytest.raises(InvalidStateError):
            MarginalEstimateSet(1, 1, {QubitSubset((0,)): HermitianOperator(1, np.eye(2))})

    def test_from_exact_rejects_wrong_subset_size(self):
        with pytest.raises(DimensionError):
            MarginalEstimateSet.from_exact(ghz_state(3), 2, subsets=[(0, 1, 2)])


class TestOverlappingTomography:
    """Marginals from one shared random-basis record set."""

    def test_all_pairs_close(self, ghz_shots):
        estimates = overlapping_tomography(ghz_shots, 2)
        assert len(estimates) == 6
        assert estimates.repetitions == 20000
        assert max(estimates.distances_to(ghz_state(4)).values()) < 0.2

    def test_requested_subsets_only(self, ghz_shots):
        estimates = overlapping_tomography(ghz_shots, 2, subsets=[(0, 3)])
        assert [s.label for s in estimates.subsets()] == ["0,3"]

    def test_threads_agree(self, ghz_shots):
        serial = overlapping_tomography(ghz_shots, 2)
        parallel = overlapping_tomography(ghz_shots, 2, threads=3)
        for subset in serial.subsets():
            assert np.array_equal(serial[subset].matrix, parallel[subset].matrix)

    def test_shortfall_diagnostics(self, ghz_shots):
        estimates = overlapping_tomography(ghz_shots, 2, epsilon=0.01, delta=0.1)
        entry = estimates.diagnostics["0,1"]
        assert entry["shortfall"]
        assert entry["threshold"] == pytest.approx(bucket_threshold(4, 2, 0.01, 0.1))

    def test_unmeasured_word(self):
        store = ShotStore.from_records([MeasurementRecord("XZ", "00"), MeasurementRecord("ZX", "01")])
        with pytest.raises(InsufficientDataError):
            overlapping_tomography(store, 1)

    def test_k_out_of_range(self, ghz_shots):
        with pytest.raises(DimensionError):
            overlapping_tomography(ghz_shots, 5)

    def test_subset_size_must_match_k(self, ghz_shots):
        with pytest.raises(DimensionError):
            overlapping_tomography(ghz_shots, 2, subsets=[(0, 1, 2)])
        with pytest.raises(DimensionError):
            overlapping_tomography(ghz_shots, 2, subsets=[(0, 1), (3,)])

    def test_threshold_grows_with_precision(self):
        assert bucket_threshold(6, 2, 0.1, 0.1) > bucket_threshold(6, 2, 0.2, 0.1)
        assert bucket_threshold(8, 2, 0.1, 0.1) > bucket_threshold(6, 2, 0.1, 0.1)


@pytest.mark.slow
class TestStatisticalGuarantees:
    """Repeated-run checks of the estimators against exact answers."""

    def test_linear_inversion_is_unbiased(self):
        bell = PureState.from_vector([1, 0, 0, 1], normalize=True)
        exact = pauli_coefficients(bell.density().matrix, 2)
        schedule = exhaustive_schedule(2, 50)
        runs = 2000
        coefficients = np.array([
            pauli_coefficients(estimate_state(accumulate(run_schedule(bell, schedule, seed=run))).matrix, 2)
            for run in range(runs)
        ])
        mean = coefficients.mean(axis=0)
        stderr = coefficients.std(axis=0, ddof=1) / np.sqrt(runs)
        assert np.all(np.abs(mean - exact) <= 5 * stderr + 1e-12)

    def test_rank_r_projection_at_most_doubles_error(self):
        rng = np.random.default_rng(21)
        schedule = exhaustive_schedule(2, 30)
        for trial in range(100):
            psi = random_pure_state(2, rng)
            sigma = estimate_state(accumulate(run_schedule(psi, schedule, seed=trial)))
            truncated = project_rank_r(sigma, 1)
            assert frobenius_distance(psi, truncated) <= 2 * frobenius_distance(psi, sigma) + 1e-12

    def test_overlapping_budget_meets_precision(self):
        n, k, epsilon, delta = 8, 2, 0.25, 0.2
        budget = plan_budget("overlap", n=n, k=k, epsilon=epsilon, delta=delta)
        assert budget.shots == 288502
        state = ghz_state(n)
        runs = 50
        successes = 0
        for run in range(runs):
            store = run_schedule(state, random_schedule(n, budget.shots, seed=run), seed=1000 + run, threads=4)
            estimates = overlapping_tomography(store, k, threads=4)
            distances = estimates.distances_to(state)
            assert len(distances) == 28
            successes += max(distances.values()) <= epsilon
        assert successes / runs >= 1 - delta
