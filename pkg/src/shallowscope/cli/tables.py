"""CSV emission for sweep tables."""

import csv
import io
from typing import Any, Sequence, Tuple, Union

from shallowscope.experiments import Table

TableLike = Union[Table, Tuple[Sequence[str], Sequence[Sequence[Any]]]]


def _format(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _parse(text: str) -> Any:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    for convert in (int, float):
        try:
            return convert(text)
        except ValueError:
            pass
    return text


def emit_csv(table: TableLike) -> str:
    """RFC 4180 text with a header row; floats carry 17 significant digits.

    Example:
        >>> emit_csv((["epsilon", "rate"], [[0.1, 0.0]]))
        'epsilon,rate\\r\\n0.10000000000000001,0\\r\\n'

    Raises:
        ValueError: If a row does not match the header width
    """
    header, rows = (table.header, table.rows) if isinstance(table, Table) else table
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(header)
    for index, row in enumerate(rows):
        if len(row) != len(header):
            raise ValueError(f"row {index} has {len(row)} cells, header has {len(header)}")
        writer.writerow([_format(value) for value in row])
    return buffer.getvalue()


def parse_csv(text: str) -> Table:
    """Inverse of :func:`emit_csv` up to number formatting."""
    reader = csv.reader(io.StringIO(text))
    lines = list(reader)
    if not lines:
        raise ValueError("CSV text has no header row")
    header, *rows = lines
    return Table(tuple(header), [tuple(_parse(cell) for cell in row) for row in rows])
