"""Shot files: one JSON header line, then ``basis<TAB>outcome`` per shot."""

import json
from pathlib import Path
from typing import TextIO, Union

import numpy as np

from shallowscope.exceptions import FileFormatError
from shallowscope.sampler import BASIS_LETTERS, ShotStore, basis_letters

FORMAT_NAME = "shallowscope-shots"
FORMAT_VERSION = 1

_LETTER_CODES = {c: i + 1 for i, c in enumerate(BASIS_LETTERS)}


class ShotFileWriter:
    """Write a :class:`ShotStore` to a shot file.

    Example:
        >>> ShotFileWriter().write_store(store, "runs/ghz.shots")
    """

    def write_store(self, store: ShotStore, output_path: Union[str, Path]) -> Path:
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as f:
            self._write_header(f, store)
            self._write_records(f, store)
        return output_path

    def _write_header(self, f: TextIO, store: ShotStore):
        header = {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "n": store.n_qubits,
            "seed": store.seed,
            "schedule": store.schedule,
        }
        f.write(json.dumps(header, sort_keys=True) + "\n")

    def _write_records(self, f: TextIO, store: ShotStore):
        bases, outcomes = store.arrays()
        for b, o in zip(bases, outcomes):
            f.write(f"{basis_letters(b)}\t{''.join('1' if bit else '0' for bit in o)}\n")


class ShotFileParser:
    """Parse a shot file back into a sealed :class:`ShotStore`."""

    def parse_file(self, filepath: Union[str, Path]) -> ShotStore:
        """Read every record.

        Raises:
            FileNotFoundError: If the file does not exist
            FileFormatError: On a bad header or record, naming the line
        """
        filepath = Path(filepath)
        if not filepath.exists():
            raise FileNotFoundError(f"shot file not found: {filepath}")

        with open(filepath, "r", encoding="utf-8") as f:
            header = self._parse_header(f, filepath)
            n = header["n"]
            bases, outcomes = [], []
            for line_num, line in enumerate(f, start=2):
                line = line.rstrip("\n")
                if not line:
                    continue
                basis, outcome = self._parse_line(line, n, filepath, line_num)
                bases.append(basis)
                outcomes.append(outcome)

        store = ShotStore(n, seed=header.get("seed"), schedule=header.get("schedule", {}))
        if bases:
            store.append(np.array(bases, dtype=np.uint8), np.array(outcomes, dtype=np.uint8))
        return store.seal()

    def _parse_header(self, f: TextIO, filepath: Path) -> dict:
        line = f.readline()
        try:
            header = json.loads(line)
        except json.JSONDecodeError as e:
            raise FileFormatError(f"{filepath}: line 1: header is not JSON ({e.msg})") from e
        if not isinstance(header, dict) or header.get("format") != FORMAT_NAME:
            raise FileFormatError(f"{filepath}: line 1: expected a {FORMAT_NAME} header")
        if header.get("version") != FORMAT_VERSION:
            raise FileFormatError(f"{filepath}: line 1: unsupported version {header.get('version')!r}")
        if not isinstance(header.get("n"), int) or header["n"] < 1:
            raise FileFormatError(f"{filepath}: line 1: header needs a positive integer 'n'")
        return header

    def _parse_line(self, line: str, n: int, filepath: Path, line_num: int):
        parts = line.split("\t")
        if len(parts) != 2:
            raise FileFormatError(f"{filepath}: line {line_num}: expected 'basis<TAB>outcome'")
        basis, outcome = parts
        if len(basis) != n or len(outcome) != n:
            raise FileFormatError(f"{filepath}: line {line_num}: record does not have {n} qubits")
        try:
            codes = [_LETTER_CODES[c] for c in basis]
        except KeyError as e:
            raise FileFormatError(f"{filepath}: line {line_num}: bad basis letter {e.args[0]!r}") from None
        if set(outcome) - {"0", "1"}:
            raise FileFormatError(f"{filepath}: line {line_num}: outcome {outcome!r} is not a bit string")
        return codes, [int(b) for b in outcome]
