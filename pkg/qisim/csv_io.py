"""CSV emission for sweep, trajectory, bound and Fock tables"""

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

FLOAT_FORMAT = ".17g"


@dataclass(frozen=True)
class ResultTable:
    """Header, rows and leading '# ' comment lines of one output file"""

    columns: tuple[str, ...]
    rows: list[tuple[Any, ...]] = field(default_factory=list)
    comments: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        width = len(self.columns)
        for row in self.rows:
            if len(row) != width:
                raise ValueError(f"Row {row!r} has {len(row)} cells, expected {width}")

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> list[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, FLOAT_FORMAT)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def render_csv(table: ResultTable) -> str:
    buffer = io.StringIO()
    for comment in table.comments:
        buffer.write(f"# {comment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_cell(value) for value in row])
    return buffer.getvalue()


def emit_csv(table: ResultTable, path: str | Path) -> Path:
    """Write the table; I/O errors propagate unchanged"""
    target = Path(path)
    with target.open("w", encoding="utf-8", newline="") as handle:
        handle.write(render_csv(table))
    return target


def read_csv(path: str | Path) -> tuple[list[str], list[dict[str, str]]]:
    """Comment lines and rows of a file written by emit_csv"""
    comments: list[str] = []
    lines: Sequence[str]
    with Path(path).open(encoding="utf-8", newline="") as handle:
        lines = handle.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("# ") and not body:
            comments.append(line[2:])
        else:
            body.append(line)
    return comments, list(csv.DictReader(body))
