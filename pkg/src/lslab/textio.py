"""Repo-wide text formats: matrix files, key=value blocks, CSV tables.

Matrix text format: optional leading ``# key=value`` provenance lines, then a
``<rows> <cols>`` header line, then one whitespace-separated row per line.
Floats are written with ``%.17e`` (18 significant digits) so every float64
round-trips exactly.  Key=value config/manifest files hold one ``key=value``
per line with ``#`` comments.  All writers emit ``\n`` newlines and no
timestamps, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io as _stdio
import os

import numpy as np

from .errors import IoError
from .kernels import as_matrix


def format_float(x: float) -> str:
    return "%.17e" % float(x)


def matrix_text(a, header: dict[str, str] | None = None) -> str:
    a = as_matrix(a)
    lines = []
    if header:
        for k, v in header.items():
            lines.append(f"# {k}={v}")
    lines.append(f"{a.shape[0]} {a.shape[1]}")
    for row in a:
        lines.append(" ".join(format_float(x) for x in row))
    return "\n".join(lines) + "\n"


def write_matrix(path, a, header: dict[str, str] | None = None) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(matrix_text(a, header))


def read_matrix(path) -> tuple[np.ndarray, dict[str, str]]:
    """Parse a matrix text file; returns (matrix, provenance header)."""
    header: dict[str, str] = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    body = []
    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            text = stripped[1:].strip()
            if "=" in text:
                k, v = text.split("=", 1)
                header[k.strip()] = v.strip()
            continue
        body.append(stripped)
    if not body:
        raise IoError(f"{path}: no matrix payload")
    dims = body[0].split()
    if len(dims) != 2:
        raise IoError(f"{path}: first payload line must be '<rows> <cols>'")
    try:
        rows, cols = int(dims[0]), int(dims[1])
    except ValueError as exc:
        raise IoError(f"{path}: bad dimensions line {body[0]!r}") from exc
    if len(body) - 1 != rows:
        raise IoError(f"{path}: expected {rows} rows, found {len(body) - 1}")
    data = []
    for line in body[1:]:
        vals = line.split()
        if len(vals) != cols:
            raise IoError(f"{path}: row with {len(vals)} entries, expected {cols}")
        try:
            data.append([float(v) for v in vals])
        except ValueError as exc:
            raise IoError(f"{path}: non-numeric entry in row {line!r}") from exc
    return np.array(data, dtype=np.float64).reshape(rows, cols), header


def write_keyvalues(path, items: dict[str, str]) -> None:
    with open(path, "w", newline="\n") as fh:
        for k, v in items.items():
            fh.write(f"{k}={v}\n")


def read_keyvalues(path) -> dict[str, str]:
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    out: dict[str, str] = {}
    for n, line in enumerate(lines, 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise IoError(f"{path}:{n}: expected key=value, got {line!r}")
        k, v = stripped.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _format_cell(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format_float(float(x))
    return str(x)


def csv_text(fieldnames: list[str], rows: list[dict]) -> str:
    buf = _stdio.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _format_cell(row[k]) for k in fieldnames})
    return buf.getvalue()


def write_csv(path, fieldnames: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(csv_text(fieldnames, rows))


def read_csv(path) -> list[dict[str, str]]:
    try:
        with open(path, newline="") as fh:
            return list(csv.DictReader(fh))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def ensure_dir(path) -> str:
    os.makedirs(path, exist_ok=True)
    return path
