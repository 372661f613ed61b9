"""Text formats for grids.

Tensor format::

    dt-tensor <rank> <d0> <d1> ... <d_{rank-1}>
    <values, row-major, whitespace separated, one innermost row per line>

CSV format (rank 2 only): comma-separated rows, no header.

Numbers are written in the shortest decimal form that reads back to the same
float, so a write followed by a read is bit-exact.
"""

import csv
import logging
import math
import re
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import TextIO

import numpy as np

from quaddt.errors import CountMismatchError, InputError, InvalidParameterError, ParseError

logger = logging.getLogger(__name__)

TENSOR_MAGIC = "dt-tensor"
CSV_SUFFIXES = {".csv"}

_REAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_COUNT = re.compile(r"\d+")
_TOKEN = re.compile(r"\S+")


def format_real(value: float) -> str:
    """Shortest decimal text that parses back to exactly value."""
    value = float(value)
    if value == 0:
        return "-0" if math.copysign(1.0, value) < 0 else "0"
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def parse_real(token: str, line: int | None = None, column: int | None = None) -> float:
    if not _REAL.fullmatch(token):
        raise ParseError(f"cannot parse {token!r} as a number", line, column)
    value = float(token)
    if not math.isfinite(value):
        raise ParseError(f"value {token!r} is not finite", line, column)
    return value


def _tokens(lines: Iterable[str], first_line: int) -> Iterator[tuple[str, int, int]]:
    for lineno, text in enumerate(lines, start=first_line):
        for match in _TOKEN.finditer(text):
            yield match.group(), lineno, match.start() + 1


def _parse_count(token: str, what: str, column: int) -> int:
    if not _COUNT.fullmatch(token) or int(token) < 1:
        raise ParseError(f"{what} must be a positive integer, got {token!r}", 1, column)
    return int(token)


def _finite_grid(grid) -> np.ndarray:
    data = np.asarray(grid, dtype=np.float64)
    if data.ndim < 1 or data.size == 0:
        raise InputError(f"cannot write an empty grid of shape {data.shape}")
    if not np.isfinite(data).all():
        raise InputError("cannot write non-finite grid values")
    return data


def read_tensor(stream: TextIO) -> np.ndarray:
    """Parse a dt-tensor document into a float64 array."""
    lines = stream.read().splitlines()
    if not lines:
        raise ParseError(f"empty input, expected a '{TENSOR_MAGIC}' header", 1)

    header = list(_tokens(lines[:1], 1))
    if not header or header[0][0] != TENSOR_MAGIC:
        raise ParseError(f"header must start with '{TENSOR_MAGIC}'", 1, 1)
    if len(header) < 2:
        raise ParseError("header is missing the rank", 1, len(lines[0]) + 1)
    rank = _parse_count(header[1][0], "rank", header[1][2])
    extents = [_parse_count(token, "extent", column) for token, _, column in header[2:]]
    if len(extents) != rank:
        raise ParseError(f"header declares rank {rank} but lists {len(extents)} extents", 1)

    values = [parse_real(token, line, column) for token, line, column in _tokens(lines[1:], 2)]
    expected = math.prod(extents)
    if len(values) != expected:
        raise CountMismatchError(expected, len(values))
    return np.array(values, dtype=np.float64).reshape(extents)


def write_tensor(grid, stream: TextIO):
    """Write grid in dt-tensor format, one innermost row per line."""
    data = _finite_grid(grid)
    extents = " ".join(str(d) for d in data.shape)
    stream.write(f"{TENSOR_MAGIC} {data.ndim} {extents}\n")
    for row in data.reshape(-1, data.shape[-1]).tolist():
        stream.write(" ".join(format_real(v) for v in row) + "\n")


def read_csv_2d(stream: TextIO) -> np.ndarray:
    """Parse comma-separated rows into a rank-2 array. Blank lines are skipped."""
    rows: list[list[float]] = []
    reader = csv.reader(stream)
    for cells in reader:
        if not cells or all(not c.strip() for c in cells):
            continue
        line = reader.line_num
        row = [parse_real(cell.strip(), line, field) for field, cell in enumerate(cells, start=1)]
        if rows and len(row) != len(rows[0]):
            raise ParseError(f"row {len(rows) + 1} has {len(row)} values, expected {len(rows[0])}", line)
        rows.append(row)
    if not rows:
        raise ParseError("empty CSV input", 1)
    return np.array(rows, dtype=np.float64)


def write_csv_2d(grid, stream: TextIO):
    data = _finite_grid(grid)
    if data.ndim != 2:
        raise InvalidParameterError(f"CSV output needs a rank-2 grid, got rank {data.ndim}")
    writer = csv.writer(stream, lineterminator="\n")
    for row in data.tolist():
        writer.writerow(format_real(v) for v in row)


def load_grid(path: Path) -> np.ndarray:
    """Read a grid, choosing CSV or tensor format by file extension."""
    path = Path(path)
    with open(path, newline="") as f:
        if path.suffix.lower() in CSV_SUFFIXES:
            return read_csv_2d(f)
        return read_tensor(f)


def save_grid(grid, path: Path):
    """Write a grid by extension via a temp file swapped into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(path.name + ".tmp")
    try:
        with open(tmp_path, "w", newline="") as f:
            if path.suffix.lower() in CSV_SUFFIXES:
                write_csv_2d(grid, f)
            else:
                write_tensor(grid, f)
    except Exception:
        tmp_path.unlink(missing_ok=True)
        raise
    tmp_path.replace(path)
    logger.debug("wrote grid %s to %s", np.shape(grid), path)
