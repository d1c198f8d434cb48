"""Tests for shot file reading and writing."""

import json
import tempfile
import unittest
from pathlib import Path

import numpy as np

from shallowscope.circuit import ghz_state
from shallowscope.exceptions import FileFormatError
from shallowscope.io import ShotFileParser, ShotFileWriter
from shallowscope.io.shots import FORMAT_NAME, FORMAT_VERSION
from shallowscope.sampler import MeasurementRecord, ShotStore, random_schedule, run_schedule


class TestShotFiles(unittest.TestCase):
    """Test the shot file format."""

    def setUp(self):
        """Create temp directory for test files."""
        self.temp_dir = tempfile.TemporaryDirectory()
        self.temp_path = Path(self.temp_dir.name)

    def tearDown(self):
        """Clean up temp directory."""
        self.temp_dir.cleanup()

    def write_raw(self, lines, filename="raw.shots", n=2):
        filepath = self.temp_path / filename
        header = {"format": FORMAT_NAME, "version": FORMAT_VERSION, "n": n, "seed": 0, "schedule": {}}
        with open(filepath, "w", encoding="utf-8") as f:
            f.write(json.dumps(header) + "\n")
            for line in lines:
                f.write(line + "\n")
        return filepath

    def test_round_trip(self):
        store = run_schedule(ghz_state(3), random_schedule(3, 500, seed=2), seed=4)
        path = ShotFileWriter().write_store(store, self.temp_path / "nested" / "ghz.shots")

        restored = ShotFileParser().parse_file(path)
        self.assertTrue(restored.sealed)
        self.assertEqual(restored.n_qubits, 3)
        self.assertEqual(restored.seed, 4)
        self.assertEqual(restored.schedule, store.schedule)
        for original, parsed in zip(store.arrays(), restored.arrays()):
            self.assertTrue(np.array_equal(original, parsed))

    def test_record_lines(self):
        store = ShotStore.from_records([MeasurementRecord("XZ", "01"), MeasurementRecord("YY", "10")])
        path = ShotFileWriter().write_store(store, self.temp_path / "two.shots")
        lines = path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[1:], ["XZ\t01", "YY\t10"])
        self.assertEqual(json.loads(lines[0])["format"], FORMAT_NAME)

    def test_blank_lines_skipped(self):
        path = self.write_raw(["XZ\t01", "", "ZZ\t11"])
        self.assertEqual(len(ShotFileParser().parse_file(path)), 2)

    def test_empty_store(self):
        path = ShotFileWriter().write_store(ShotStore(2).seal(), self.temp_path / "empty.shots")
        self.assertEqual(len(ShotFileParser().parse_file(path)), 0)

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            ShotFileParser().parse_file(self.temp_path / "absent.shots")

    def test_bad_header(self):
        filepath = self.temp_path / "bad.shots"
        filepath.write_text("not json\nXZ\t01\n", encoding="utf-8")
        with self.assertRaisesRegex(FileFormatError, "line 1"):
            ShotFileParser().parse_file(filepath)

    def test_wrong_format_name(self):
        filepath = self.temp_path / "other.shots"
        filepath.write_text(json.dumps({"format": "acmi", "version": 1, "n": 2}) + "\n", encoding="utf-8")
        with self.assertRaisesRegex(FileFormatError, "line 1"):
            ShotFileParser().parse_file(filepath)

    def test_missing_tab(self):
        path = self.write_raw(["XZ\t01", "XZ 01"])
        with self.assertRaisesRegex(FileFormatError, "line 3"):
            ShotFileParser().parse_file(path)

    def test_wrong_length(self):
        path = self.write_raw(["XZY\t010"])
        with self.assertRaisesRegex(FileFormatError, "line 2"):
            ShotFileParser().parse_file(path)

    def test_bad_letter(self):
        path = self.write_raw(["XI\t01"])
        with self.assertRaisesRegex(FileFormatError, "bad basis letter"):
            ShotFileParser().parse_file(path)

    def test_bad_bit(self):
        path = self.write_raw(["XZ\t02"])
        with self.assertRaisesRegex(FileFormatError, "not a bit string"):
            ShotFileParser().parse_file(path)


if __name__ == "__main__":
    unittest.main()
