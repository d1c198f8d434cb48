"""Unit tests for marginal maps and their kernels."""

import numpy as np
import pytest

from shallowscope.circuit import ghz_state
from shallowscope.exceptions import DimensionError
from shallowscope.qcore import partial_trace
from shallowscope.uda import MarginalMap, ghz_counterexample, kernel_basis


def _pairs(n):
    return [(a, b) for a in range(n) for b in range(a + 1, n)]


class TestMarginalMap:

    def test_rejects_empty_graph(self):
        with pytest.raises(ValueError):
            MarginalMap.of(2, [])

    def test_rejects_empty_subset(self):
        with pytest.raises(ValueError):
            MarginalMap.of(2, [()])

    def test_rejects_out_of_range(self):
        with pytest.raises(DimensionError):
            MarginalMap.of(2, [(0, 2)])

    def test_apply(self):
        marginals = MarginalMap.of(3, [(0, 1), (2,)]).apply(ghz_state(3))
        assert np.allclose(marginals[0].matrix, np.diag([0.5, 0, 0, 0.5]))
        assert np.allclose(marginals[1].matrix, np.eye(2) / 2)

    def test_ghz_mixture_shares_pair_marginals(self):
        psi, mixture = ghz_counterexample(3)
        assert MarginalMap.of(3, _pairs(3)).max_deviation(psi, mixture) < 1e-15
        assert MarginalMap.of(3, [(0, 1, 2)]).max_deviation(psi, mixture) == pytest.approx(0.5)


class TestKernelBasis:
    """Pauli-coordinate kernels."""

    def test_single_sites(self):
        kernel = kernel_basis(MarginalMap.of(2, [(0,), (1,)]))
        assert kernel.dimension == 9

    def test_all_pairs_of_three(self):
        assert kernel_basis(MarginalMap.of(3, _pairs(3))).dimension == 27

    def test_full_register_has_trivial_kernel(self):
        assert len(kernel_basis(MarginalMap.of(3, [(0, 1, 2)]))) == 0

    def test_elements_are_marginal_free(self):
        marginal_map = MarginalMap.of(3, [(0, 1), (1, 2)])
        kernel = kernel_basis(marginal_map)
        for element in kernel:
            assert abs(np.trace(element.matrix)) < 1e-12
            for subset in marginal_map.subsets:
                assert np.allclose(partial_trace(element, subset).matrix, 0)

    def test_orthonormal(self):
        kernel = kernel_basis(MarginalMap.of(2, [(0,)]))
        matrices = [e.matrix for e in kernel]
        gram = np.array([[np.trace(a.conj().T @ b) for b in matrices] for a in matrices])
        assert np.allclose(gram, np.eye(len(matrices)))

    def test_coordinates(self):
        kernel = kernel_basis(MarginalMap.of(3, _pairs(3)))
        psi, mixture = ghz_counterexample(3)
        difference = kernel.coordinates(psi) - kernel.coordinates(mixture)
        assert np.linalg.norm(difference) > 0.5

    def test_register_too_large(self):
        with pytest.raises(DimensionError):
            kernel_basis(MarginalMap.of(9, [(0, 1)]))
