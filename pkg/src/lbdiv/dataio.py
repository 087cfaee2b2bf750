"""Parsing helpers shared by the CLI: CSV matrices and small JSON payloads.

CSV is comma-separated, UTF-8, LF or CRLF; an optional header row is
detected by a non-numeric first row.
"""

from __future__ import annotations

import json

import numpy as np


class ParseError(ValueError):
    """Input that failed to parse; `line` is the offending 1-based row."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _is_numeric_row(cells) -> bool:
    try:
        for c in cells:
            float(c)
    except ValueError:
        return False
    return True


def parse_csv_matrix(text: str):
    """Parse CSV text into (rows array, header or None)."""
    lines = [ln for ln in text.replace("\r\n", "\n").split("\n") if ln.strip()]
    if not lines:
        raise ParseError("empty input")
    header = None
    start = 0
    first = [c.strip() for c in lines[0].split(",")]
    if not _is_numeric_row(first):
        header = first
        start = 1
        if len(lines) == 1:
            raise ParseError("no data rows after header")
    rows = []
    width = None
    for idx in range(start, len(lines)):
        cells = [c.strip() for c in lines[idx].split(",")]
        try:
            row = [float(c) for c in cells]
        except ValueError as exc:
            raise ParseError(f"non-numeric value in row: {exc}",
                             line=idx + 1) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(
                f"expected {width} columns, found {len(row)}", line=idx + 1)
        rows.append(row)
    return np.array(rows), header


def parse_vector(text: str) -> np.ndarray:
    """A single comma-separated (or JSON array) vector of reals."""
    text = text.strip()
    if text.startswith("["):
        try:
            return np.asarray(json.loads(text), dtype=float)
        except (json.JSONDecodeError, ValueError) as exc:
            raise ParseError(f"bad JSON vector: {exc}") from None
    try:
        return np.array([float(c) for c in text.split(",")])
    except ValueError as exc:
        raise ParseError(f"bad vector: {exc}") from None


def parse_int_vector(text: str) -> list:
    vec = parse_vector(text)
    out = [int(v) for v in vec]
    if any(v != int(v) for v in vec):
        raise ParseError("expected integers")
    return out


def load_gain_table(text: str) -> np.ndarray:
    """Gain tables are JSON arrays of reals."""
    try:
        vals = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad gain table JSON: {exc}") from None
    return np.asarray(vals, dtype=float)
