"""Deterministic CSV serialization.

Floats are printed with %.17g so a double-precision value survives a
round-trip through the file exactly; None becomes an empty field and booleans
the lowercase words.  Rows are joined with plain newlines regardless of
platform so identical runs produce byte-identical files.
"""
from __future__ import annotations

import os


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "%.17g" % value
    raise TypeError(f"cannot format {type(value).__name__} as a CSV cell")


def render_csv(header: list[str], rows: list[tuple]) -> str:
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(
                f"row width {len(row)} does not match header width {len(header)}"
            )
        lines.append(",".join(format_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    text = render_csv(header, rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def sibling_path(path: str, suffix: str) -> str:
    """foo/bar.csv -> foo/bar-<suffix>.csv (used for secondary outputs)."""
    stem, ext = os.path.splitext(path)
    return f"{stem}-{suffix}{ext or '.csv'}"
