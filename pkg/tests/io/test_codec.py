"""Tests for the JSON codecs."""

import tempfile
import unittest
from pathlib import Path

import numpy as np

from shallowscope.circuit import Geometry, ghz_circuit, ghz_state, random_circuit
from shallowscope.exceptions import FileFormatError
from shallowscope.io.codec import (
    circuit_from_dict,
    circuit_to_dict,
    complex_from_json,
    complex_to_json,
    estimate_from_dict,
    estimate_to_dict,
    estimates_from_dict,
    estimates_to_dict,
    hamiltonian_from_dict,
    hamiltonian_to_dict,
    load,
    read_json,
    state_from_dict,
    state_to_dict,
    write_json,
)
from shallowscope.parenth import parent_hamiltonian
from shallowscope.qcore import DensityMatrix, PureState, random_density_matrix
from shallowscope.tomography import MarginalEstimateSet


class TestCodecs(unittest.TestCase):
    """Dictionary codecs for the domain types."""

    def test_complex_pairs(self):
        self.assertEqual(complex_to_json(np.array([1 + 2j, -0.5])), [[1.0, 2.0], [-0.5, 0.0]])
        self.assertTrue(np.array_equal(complex_from_json([[1.0, 2.0]]), np.array([1 + 2j])))

    def test_complex_rejects_scalars(self):
        with self.assertRaises(FileFormatError):
            complex_from_json([1.0, 2.0, 3.0])

    def test_pure_state(self):
        psi = ghz_state(3)
        restored = state_from_dict(state_to_dict(psi))
        self.assertIsInstance(restored, PureState)
        self.assertTrue(np.array_equal(restored.amplitudes, psi.amplitudes))

    def test_density_matrix_is_bit_exact(self):
        rho = random_density_matrix(2, rng=np.random.default_rng(1))
        restored = state_from_dict(state_to_dict(rho))
        self.assertIsInstance(restored, DensityMatrix)
        self.assertTrue(np.array_equal(restored.matrix, rho.matrix))

    def test_unknown_state_kind(self):
        with self.assertRaises(FileFormatError):
            state_from_dict({"n": 1, "kind": "mixed", "data": [[1, 0], [0, 0]]})

    def test_missing_field(self):
        with self.assertRaisesRegex(FileFormatError, "'layers'"):
            circuit_from_dict({"n": 2})

    def test_circuit(self):
        circuit = random_circuit(4, 2, Geometry("square_lattice"), seed=3)
        restored = circuit_from_dict(circuit_to_dict(circuit))
        self.assertEqual(restored.geometry, circuit.geometry)
        self.assertEqual(restored.depth, 2)
        for (_, a), (_, b) in zip(circuit.gates(), restored.gates()):
            self.assertEqual(a.qubits, b.qubits)
            self.assertTrue(np.array_equal(a.unitary, b.unitary))

    def test_hamiltonian(self):
        h = parent_hamiltonian(ghz_circuit(3))
        restored = hamiltonian_from_dict(hamiltonian_to_dict(h))
        self.assertEqual(restored.supports, h.supports)
        self.assertIsNone(restored.certificate)

    def test_estimate_from_pauli_map(self):
        marginal = MarginalEstimateSet.from_exact(ghz_state(2), 2)[(0, 1)]
        data = estimate_to_dict(marginal, include_matrix=False)
        self.assertAlmostEqual(data["pauli"]["XX"], 1.0)
        self.assertAlmostEqual(data["pauli"]["ZI"], 0.0)
        self.assertTrue(np.allclose(estimate_from_dict(data).matrix, marginal.matrix))

    def test_estimate_rejects_wrong_length(self):
        with self.assertRaises(FileFormatError):
            estimate_from_dict({"n": 2, "pauli": {"X": 1.0}})

    def test_estimate_set(self):
        estimates = MarginalEstimateSet.from_exact(ghz_state(3), 2)
        restored = estimates_from_dict(estimates_to_dict(estimates))
        self.assertEqual([s.label for s in restored.subsets()], ["0,1", "0,2", "1,2"])
        for subset in estimates.subsets():
            self.assertTrue(np.array_equal(restored[subset].matrix, estimates[subset].matrix))


class TestFiles(unittest.TestCase):
    """JSON file helpers."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.temp_path = Path(self.temp_dir.name)

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_write_and_read(self):
        path = write_json({"b": 1, "a": [1, 2]}, self.temp_path / "sub" / "doc.json")
        self.assertEqual(read_json(path), {"a": [1, 2], "b": 1})
        self.assertTrue(path.read_text(encoding="utf-8").startswith('{"a"'))

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            read_json(self.temp_path / "absent.json")

    def test_invalid_json_names_line(self):
        path = self.temp_path / "broken.json"
        path.write_text('{\n"a": 1,\n}', encoding="utf-8")
        with self.assertRaisesRegex(FileFormatError, "line 3"):
            read_json(path)

    def test_load_tags_file_name(self):
        path = write_json({"n": 2}, self.temp_path / "circuit.json")
        with self.assertRaisesRegex(FileFormatError, "circuit.json"):
            load(path, circuit_from_dict)


if __name__ == "__main__":
    unittest.main()
