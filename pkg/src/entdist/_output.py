"""CSV/JSON table output with atomic file writes.

CSV is the primary format (header row, full double precision); JSON
mirrors the same table as ``{"columns": [...], "rows": [[...]]}``.  Files
are written to a temporary sibling and renamed into place so a failed run
never leaves a partial file behind.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

__all__ = ["Table", "format_cell", "render", "write_table", "emit"]


def format_cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


class Table:
    def __init__(self, columns, rows):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]

    def render_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_cell(v) for v in row])
        return buffer.getvalue()

    def render_json(self) -> str:
        def jsonable(v):
            return v if v is None or isinstance(v, (int, float, str, bool)) else str(v)

        payload = {
            "columns": self.columns,
            "rows": [[jsonable(v) for v in row] for row in self.rows],
        }
        return json.dumps(payload, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.render_csv()
        if fmt == "json":
            return self.render_json()
        raise ValueError(f"unknown format {fmt!r}")


def render(columns, rows, fmt: str = "csv") -> str:
    return Table(columns, rows).render(fmt)


def write_table(path, columns, rows, fmt: str = "csv") -> None:
    """Write atomically: temp file in the target directory, then rename."""
    path = Path(path)
    text = Table(columns, rows).render(fmt)
    directory = path.parent
    if not directory.is_dir():
        raise FileNotFoundError(f"output directory {directory} does not exist")
    fd, tmp_name = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def emit(columns, rows, path=None, fmt: str = "csv", stream=None) -> None:
    """Write a table to a file when a path is given, else to the stream."""
    if path is not None:
        write_table(path, columns, rows, fmt)
    else:
        import sys

        (stream or sys.stdout).write(Table(columns, rows).render(fmt))
