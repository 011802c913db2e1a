"""CSV plumbing: one dialect everywhere.

Comma separator, double-quote quoting, UTF-8, ``|`` as the intra-cell
separator for multi-valued attributes, ``\\n`` line endings on output.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import IO, Any, Iterator

MULTI_SEP = "|"


def text_stream(source: Any) -> io.StringIO:
    """Materialize *source* (path, bytes, or file object) as a text stream.

    Whole-file reads are fine here; streaming inputs larger than memory is a
    non-goal.
    """
    if isinstance(source, (str, Path)):
        return io.StringIO(Path(source).read_text(encoding="utf-8"))
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8"))
    data = source.read()
    if isinstance(data, bytes):
        return io.StringIO(data.decode("utf-8"))
    return io.StringIO(data)


def read_rows(source: Any) -> Iterator[tuple[int, list[str]]]:
    """Yield (1-based line number, row cells) for every CSV record."""
    stream = text_stream(source)
    reader = csv.reader(stream)
    for row in reader:
        yield reader.line_num, row


def write_rows(dest: Any, rows: Iterator[list[str]] | list[list[str]]) -> None:
    """Write rows to *dest* (path or text file object) with \\n terminators."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            _write(fh, rows)
    else:
        _write(dest, rows)


def _write(fh: IO[str], rows) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    for row in rows:
        writer.writerow(row)


def split_multi(cell: str) -> list[str]:
    """Split a multi-valued cell; empty cell means no value."""
    return [v for v in cell.split(MULTI_SEP) if v]


def join_multi(values) -> str:
    """Render a value set with a byte-stable (sorted) order."""
    return MULTI_SEP.join(sorted(values))
