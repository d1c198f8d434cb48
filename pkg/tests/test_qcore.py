"""Unit tests for the dense linear-algebra substrate."""

import numpy as np
import pytest

from shallowscope.exceptions import DimensionError, InvalidStateError
from shallowscope.qcore import (
    DensityMatrix,
    HermitianOperator,
    PauliString,
    PureState,
    QubitSubset,
    apply_local,
    embed_operator,
    fidelity_pure,
    frobenius_distance,
    operator_from_pauli_coefficients,
    partial_trace,
    pauli_coefficients,
    pauli_expectation,
    pauli_matrix,
    pauli_weights,
    random_density_matrix,
    random_hermitian,
    random_pure_state,
    trace_distance,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)


def ghz(n):
    vec = np.zeros(2 ** n, dtype=complex)
    vec[0] = vec[-1] = 1 / np.sqrt(2)
    return PureState(n, vec)


class TestTypes:
    """Construction invariants."""

    def test_pure_state_requires_unit_norm(self):
        with pytest.raises(InvalidStateError):
            PureState(1, [1, 1])

    def test_pure_state_requires_matching_length(self):
        with pytest.raises(DimensionError):
            PureState(2, [1, 0])

    def test_from_vector_normalizes_and_infers_size(self):
        psi = PureState.from_vector([1, 1, 1, 1], normalize=True)
        assert psi.n_qubits == 2
        assert np.allclose(psi.amplitudes, 0.5)

    def test_qubit_limit(self):
        with pytest.raises(DimensionError):
            PureState.from_vector(np.ones(2 ** 13), normalize=True)

    def test_amplitudes_are_read_only(self):
        psi = PureState.basis("01")
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 1

    def test_basis_uses_qubit_zero_as_msb(self):
        psi = PureState.basis("10")
        assert psi.amplitudes[2] == 1
        assert pauli_expectation(psi, "ZI") == pytest.approx(-1.0)
        assert pauli_expectation(psi, "IZ") == pytest.approx(1.0)

    def test_density_matrix_trace(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(1, np.eye(2))

    def test_density_matrix_psd(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(1, np.diag([1.5, -0.5]))

    def test_hermitian_operator_rejects_non_hermitian(self):
        with pytest.raises(InvalidStateError):
            HermitianOperator(1, np.array([[0, 1], [0, 0]]))

    def test_hermitian_operator_allows_any_trace(self):
        op = HermitianOperator(1, np.diag([1.2, -0.2]))
        assert op.trace == pytest.approx(1.0)
        assert op.eigenvalues()[0] == pytest.approx(-0.2)

    def test_hermitian_operator_has_no_spectral_checks(self):
        op = HermitianOperator(1, np.diag([2.0, -3.0]))
        assert op.trace == pytest.approx(-1.0)
        assert op.matrix[1, 1] == -3.0

    def test_maximally_mixed(self):
        rho = DensityMatrix.maximally_mixed(2)
        assert np.allclose(rho.matrix, np.eye(4) / 4)


class TestPauliString:
    """Pauli words and their base-4 codes."""

    def test_weight_and_support(self):
        p = PauliString("IXIZ")
        assert p.weight == 2
        assert p.support == (1, 3)

    def test_code(self):
        assert PauliString("XYZ").code == 1 * 16 + 2 * 4 + 3
        assert PauliString.from_code(27, 3) == PauliString("XYZ")

    def test_lowercase_is_normalized(self):
        assert str(PauliString("xz")) == "XZ"

    def test_rejects_bad_letters(self):
        with pytest.raises(ValueError):
            PauliString("XA")

    def test_weights_table(self):
        weights = pauli_weights(2)
        for code in range(16):
            assert weights[code] == PauliString.from_code(code, 2).weight


class TestQubitSubset:
    """Sorted qubit subsets."""

    def test_must_increase(self):
        with pytest.raises(ValueError):
            QubitSubset((1, 0))

    def test_of_sorts(self):
        assert QubitSubset.of([3, 0]).indices == (0, 3)

    def test_of_rejects_duplicates(self):
        with pytest.raises(ValueError):
            QubitSubset.of([1, 1])

    def test_label_round_trip(self):
        assert QubitSubset.parse("0,3").label == "0,3"

    def test_check_range(self):
        with pytest.raises(DimensionError):
            QubitSubset((0, 4)).check_range(4)

    def test_complement(self):
        assert QubitSubset((1,)).complement(3) == (0, 2)


class TestPauliAlgebra:
    """Pauli matrices, expectations and coefficient transforms."""

    def test_z_matrix(self):
        assert np.allclose(pauli_matrix("Z").matrix, Z)

    def test_identity(self):
        assert np.allclose(pauli_matrix("II").matrix, np.eye(4))

    def test_xy_is_kronecker_product(self):
        assert np.allclose(pauli_matrix("XY").matrix, np.kron(X, Y))

    @pytest.mark.parametrize("letters", ["X", "YZ", "XIZ", "ZZY"])
    def test_involutory_and_traceless(self, letters):
        m = pauli_matrix(letters).matrix
        assert np.allclose(m @ m, np.eye(m.shape[0]))
        assert abs(np.trace(m)) < 1e-12

    def test_expectation_basis_state(self):
        assert pauli_expectation(PureState.basis("0"), "Z") == pytest.approx(1.0)

    def test_expectation_ghz(self):
        psi = ghz(3)
        assert pauli_expectation(psi, "ZII") == pytest.approx(0.0)
        assert pauli_expectation(psi, "XXX") == pytest.approx(1.0)
        assert pauli_expectation(psi.density(), "XXX") == pytest.approx(1.0)

    def test_expectation_y_eigenstate(self):
        psi = PureState(1, np.array([1, 1j]) / np.sqrt(2))
        assert pauli_expectation(psi, "Y") == pytest.approx(1.0)

    def test_expectation_matches_dense_oracle(self):
        rho = random_density_matrix(3, rng=7)
        for letters in ("XYZ", "IYI", "ZZX", "YYY"):
            expected = np.trace(rho.matrix @ pauli_matrix(letters).matrix).real
            assert pauli_expectation(rho, letters) == pytest.approx(expected, abs=1e-12)

    def test_expectation_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            pauli_expectation(PureState.basis("00"), "Z")

    def test_coefficients_round_trip(self):
        m = random_hermitian(3, rng=1).matrix
        alpha = pauli_coefficients(m, 3)
        assert alpha.shape == (64,)
        assert np.allclose(operator_from_pauli_coefficients(alpha, 3), m)

    def test_coefficients_match_traces(self):
        rho = random_density_matrix(2, rng=3)
        alpha = pauli_coefficients(rho.matrix, 2)
        for code in range(16):
            p = PauliString.from_code(code, 2)
            assert alpha[code] == pytest.approx(pauli_expectation(rho, p), abs=1e-12)


class TestLocalOperations:
    """Local gate application and embedding."""

    def test_apply_x_on_qubit_zero(self):
        out = apply_local(X, [0], PureState.basis("00").amplitudes, 2)
        assert np.allclose(out, PureState.basis("10").amplitudes)

    def test_apply_two_qubit_gate_on_reversed_targets(self):
        cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
        # control qubit 2, target qubit 0
        out = apply_local(cnot, [2, 0], PureState.basis("001").amplitudes, 3)
        assert np.allclose(out, PureState.basis("101").amplitudes)

    def test_embed_operator(self):
        assert np.allclose(embed_operator(Z, [1], 2), np.kron(np.eye(2), Z))
        assert np.allclose(embed_operator(np.kron(X, Z), [0, 2], 3), pauli_matrix("XIZ").matrix)


class TestPartialTrace:
    """Reduced density matrices."""

    def test_product_state(self):
        plus = np.array([1, 1]) / np.sqrt(2)
        psi = PureState(2, np.kron([1, 0], plus))
        reduced = partial_trace(psi, [1])
        assert np.allclose(reduced.matrix, np.outer(plus, plus))

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_ghz_marginals(self, n):
        psi = ghz(n)
        expected = np.zeros((2 ** (n - 1), 2 ** (n - 1)))
        expected[0, 0] = expected[-1, -1] = 0.5
        for dropped in range(n):
            keep = [q for q in range(n) if q != dropped]
            assert np.allclose(partial_trace(psi, keep).matrix, expected)

    def test_maximally_mixed(self):
        reduced = partial_trace(DensityMatrix.maximally_mixed(2), [0])
        assert np.allclose(reduced.matrix, np.eye(2) / 2)

    def test_empty_subset(self):
        with pytest.raises(DimensionError):
            partial_trace(ghz(2), [])

    def test_out_of_range(self):
        with pytest.raises(DimensionError):
            partial_trace(ghz(2), [2])

    def test_pure_and_density_agree(self):
        psi = random_pure_state(4, rng=11)
        assert np.allclose(partial_trace(psi, [0, 2]).matrix, partial_trace(psi.density(), [0, 2]).matrix)

    def test_composes(self):
        rho = random_density_matrix(4, rng=5)
        direct = partial_trace(rho, [1, 3])
        staged = partial_trace(partial_trace(rho, [0, 1, 3]), [1, 2])
        assert np.allclose(direct.matrix, staged.matrix, atol=1e-10)

    def test_preserves_trace_and_positivity(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            rho = random_density_matrix(3, rng=rng)
            reduced = partial_trace(rho, [0, 2])
            assert isinstance(reduced, DensityMatrix)
            assert reduced.trace == pytest.approx(1.0)
            assert reduced.eigenvalues()[0] >= -1e-9

    def test_hermitian_input_stays_hermitian_operator(self):
        reduced = partial_trace(random_hermitian(2, rng=0), [0])
        assert type(reduced) is HermitianOperator


class TestDistances:
    """Trace distance, Frobenius distance and pure-state fidelity."""

    zero = PureState.basis("0")
    one = PureState.basis("1")
    mixed = DensityMatrix.maximally_mixed(1)

    def test_trace_distance_examples(self):
        assert trace_distance(self.zero, self.zero) == pytest.approx(0.0)
        assert trace_distance(self.zero, self.one) == pytest.approx(2.0)
        assert trace_distance(self.zero, self.mixed) == pytest.approx(1.0)

    def test_frobenius_examples(self):
        assert frobenius_distance(self.zero, self.zero) == pytest.approx(0.0)
        assert frobenius_distance(self.zero, self.one) == pytest.approx(np.sqrt(2))
        assert frobenius_distance(self.zero, self.mixed) == pytest.approx(np.sqrt(0.5))

    def test_fidelity_examples(self):
        assert fidelity_pure(self.zero, self.zero.density()) == pytest.approx(1.0)
        assert fidelity_pure(self.zero, self.one.density()) == pytest.approx(0.0)
        assert fidelity_pure(self.zero, self.mixed) == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            trace_distance(self.zero, PureState.basis("00"))

    def test_trace_distance_is_symmetric(self):
        a, b = random_density_matrix(2, rng=1), random_density_matrix(2, rng=2)
        assert trace_distance(a, b) == pytest.approx(trace_distance(b, a))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_norm_inequalities(self, n):
        rng = np.random.default_rng(n)
        for _ in range(50):
            a, b = random_hermitian(n, rng), random_hermitian(n, rng)
            f = frobenius_distance(a, b)
            t = trace_distance(a, b)
            assert f <= t + 1e-9
            assert t <= np.sqrt(2 ** n) * f + 1e-9

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_fidelity_bounded_by_trace_distance(self, n):
        rng = np.random.default_rng(100 + n)
        for trial in range(500):
            psi = random_pure_state(n, rng)
            rho = random_density_matrix(n, rank=1 + trial % (2 ** n), rng=rng)
            d = trace_distance(psi, rho)
            assert fidelity_pure(psi, rho) <= 1 - d ** 2 / 4 + 1e-8


class TestRandomFixtures:
    """Seeded random states."""

    def test_pure_state_is_deterministic(self):
        assert np.allclose(random_pure_state(3, 4).amplitudes, random_pure_state(3, 4).amplitudes)

    @pytest.mark.parametrize("rank", [1, 2, 4])
    def test_density_matrix_rank(self, rank):
        rho = random_density_matrix(2, rank=rank, rng=9)
        assert int(np.sum(rho.eigenvalues() > 1e-10)) == rank
        assert rho.trace == pytest.approx(1.0)

    def test_density_matrix_rank_range(self):
        with pytest.raises(ValueError):
            random_density_matrix(1, rank=3, rng=0)
