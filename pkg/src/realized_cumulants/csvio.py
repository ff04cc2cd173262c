"""Long-format path CSV: ``path_id, t, x1, ..., xk`` with a mandatory header."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .exceptions import PathParseError
from .paths import MultiPath

__all__ = ["ingest_paths", "read_paths", "write_paths", "format_float"]


def format_float(x: float) -> str:
    # repr is the shortest string that round-trips a double exactly
    return repr(float(x))


def ingest_paths(source) -> dict[str, MultiPath]:
    """Parse a path CSV into ``{path_id: MultiPath}`` in first-seen order.

    ``source`` is a filename or an open text stream.  Paths carry no jump
    marks.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return ingest_paths(fh)
    reader = csv.reader(source)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise PathParseError("empty file: header row is mandatory") from None
    k = len(header) - 2
    if k < 1 or header[:2] != ["path_id", "t"]:
        raise PathParseError("header must be path_id,t,x1[,x2,...]")
    expected = [f"x{i}" for i in range(1, k + 1)]
    if header[2:] != expected:
        raise PathParseError(f"value columns must be named {','.join(expected)}")

    rows: dict[str, tuple[list[float], list[list[float]]]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        while row and not row[-1].strip():
            row = row[:-1]
        pid = row[0].strip()
        if len(row) != k + 2:
            raise PathParseError(f"path {pid!r}, line {lineno}: expected {k + 2} fields, got {len(row)}")
        try:
            t = float(row[1])
            vals = [float(v) for v in row[2:]]
        except ValueError as exc:
            raise PathParseError(f"path {pid!r}, line {lineno}: {exc}") from None
        times, values = rows.setdefault(pid, ([], []))
        if times and not t > times[-1]:
            raise PathParseError(
                f"path {pid!r}, line {lineno}: time {t!r} does not increase (previous {times[-1]!r})"
            )
        times.append(t)
        values.append(vals)
    return {pid: MultiPath(np.array(ts), np.array(vs)) for pid, (ts, vs) in rows.items()}


def read_paths(source) -> list[MultiPath]:
    return list(ingest_paths(source).values())


def write_paths(paths, target=None) -> str | None:
    """Write paths (a list or ``{path_id: MultiPath}``) in long format.

    Returns the CSV text when ``target`` is None.
    """
    if not isinstance(paths, dict):
        paths = {str(i): p for i, p in enumerate(paths)}
    if not paths:
        raise ValueError("nothing to write")
    k = next(iter(paths.values())).n_components
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["path_id", "t"] + [f"x{i}" for i in range(1, k + 1)])
    for pid, path in paths.items():
        if path.n_components != k:
            raise ValueError("all paths must have the same number of components")
        for t, vals in zip(path.grid, path.values):
            writer.writerow([pid, format_float(t)] + [format_float(v) for v in vals])
    text = buf.getvalue()
    if target is None:
        return text
    Path(target).write_text(text)
    return None
