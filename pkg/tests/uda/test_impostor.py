"""Unit tests for the impostor search."""

from itertools import combinations

import numpy as np
import pytest

from shallowscope.circuit import ghz_state
from shallowscope.qcore import PureState, trace_distance
from shallowscope.uda import NO_IMPOSTOR, NOT_UDA, MarginalMap, ghz_counterexample, impostor_search
from shallowscope.uda.impostor import feasible_face

PAIRS_OF_THREE = [(0, 1), (0, 2), (1, 2)]


def _all_but_one(n):
    return MarginalMap.of(n, combinations(range(n), n - 1))


class TestFeasibleFace:
    """Subspace forced by the kernels of the target marginals."""

    @pytest.mark.parametrize("n", [3, 4])
    def test_ghz_face_is_two_dimensional(self, n):
        basis = feasible_face(ghz_state(n), _all_but_one(n))
        assert basis.shape == (2 ** n, 2)
        projector = basis @ basis.conj().T
        expected = np.zeros((2 ** n, 2 ** n))
        expected[0, 0] = expected[-1, -1] = 1.0
        assert np.allclose(projector, expected, atol=1e-12)

    def test_product_state_face_is_the_state(self):
        basis = feasible_face(PureState.basis("010"), MarginalMap.of(3, PAIRS_OF_THREE))
        assert basis.shape == (8, 1)
        assert abs(basis[2, 0]) == pytest.approx(1.0)


class TestImpostorSearch:
    """Witnesses and their absence."""

    @pytest.mark.parametrize("n", [3, 4])
    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_ghz_is_not_uda(self, n, seed):
        psi = ghz_state(n)
        marginal_map = _all_but_one(n)
        verdict = impostor_search(psi, marginal_map, restarts=3, seed=seed)
        assert verdict.status == NOT_UDA
        assert verdict.witness is not None
        assert verdict.distance > 1e-6
        assert verdict.distance == pytest.approx(trace_distance(psi, verdict.witness))
        assert marginal_map.max_deviation(psi, verdict.witness) <= 1e-10
        assert np.linalg.eigvalsh(verdict.witness.matrix)[0] >= -1e-12
        assert verdict.witness.trace == pytest.approx(1.0, abs=1e-12)
        assert "witness_restart" in verdict.statistics
        assert verdict.statistics["face_dimension"] == 2
        assert verdict.statistics["face_kernel_dimension"] == 2

    def test_single_restart_suffices(self):
        verdict = impostor_search(ghz_state(3), MarginalMap.of(3, PAIRS_OF_THREE), restarts=1, seed=7)
        assert verdict.status == NOT_UDA
        assert verdict.statistics["converged"] == 1

    def test_product_state_has_no_impostor(self):
        verdict = impostor_search(PureState.basis("010"), MarginalMap.of(3, PAIRS_OF_THREE), restarts=2, seed=1)
        assert verdict.status == NO_IMPOSTOR
        assert verdict.witness is None
        assert "not a proof" in verdict.caveat
        assert verdict.statistics["kernel_dimension"] == 27
        assert verdict.statistics["face_kernel_dimension"] == 0

    def test_trivial_kernel(self):
        verdict = impostor_search(ghz_state(2), MarginalMap.of(2, [(0, 1)]), restarts=2)
        assert verdict.status == NO_IMPOSTOR
        assert verdict.statistics["kernel_dimension"] == 0
        assert verdict.statistics["iterations"] == []

    def test_reproducible(self):
        marginal_map = MarginalMap.of(3, PAIRS_OF_THREE)
        a = impostor_search(ghz_state(3), marginal_map, restarts=2, seed=5)
        b = impostor_search(ghz_state(3), marginal_map, restarts=2, seed=5, threads=2)
        assert a.status == b.status
        assert a.distance == b.distance

    def test_to_dict(self):
        verdict = impostor_search(ghz_state(2), MarginalMap.of(2, [(0, 1)]), restarts=1)
        data = verdict.to_dict()
        assert data["status"] == NO_IMPOSTOR
        assert data["statistics"]["restarts"] == 1

    def test_rejects_zero_restarts(self):
        with pytest.raises(ValueError):
            impostor_search(ghz_state(2), MarginalMap.of(2, [(0,)]), restarts=0)

    def test_rejects_size_mismatch(self):
        with pytest.raises(ValueError):
            impostor_search(ghz_state(3), MarginalMap.of(2, [(0,)]))


class TestGhzCounterexample:

    def test_distance(self):
        psi, mixture = ghz_counterexample(4)
        assert trace_distance(psi, mixture) == pytest.approx(1.0)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_marginals_agree(self, n):
        psi, mixture = ghz_counterexample(n)
        assert _all_but_one(n).max_deviation(psi, mixture) <= 1e-12

    def test_rejects_single_qubit(self):
        with pytest.raises(ValueError):
            ghz_counterexample(1)
