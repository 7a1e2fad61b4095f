"""Plain-text formats for instances, colourings, classifications and reports.

Instance::

    parts 4 2
    list 0 1 3
    list 1 1 4
    ...

Colouring: one ``colour <v> <c>`` line per vertex.  Classification: ``A <part>``
and ``D <part>`` lines in order, plus optional ``f <v> <demand>`` lines (the
demand defaults to the list size).  Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .certificates import ClassifiedInstance
from .model import ListAssignment, MalformedInput, PartStructure


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _ints(tokens: list[str], number: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MalformedInput(f"line {number}: expected integers, got {' '.join(tokens)!r}") from None


def parse_instance(text: str) -> tuple[PartStructure, ListAssignment]:
    shape = None
    lists: dict[int, list[int]] = {}
    for number, tokens in _lines(text):
        head, rest = tokens[0], _ints(tokens[1:], number)
        if head == "parts":
            if shape is not None:
                raise MalformedInput(f"line {number}: second 'parts' line")
            if not rest:
                raise MalformedInput(f"line {number}: no part sizes")
            shape = PartStructure(tuple(rest))
        elif head == "list":
            if not rest:
                raise MalformedInput(f"line {number}: missing vertex")
            v, colours = rest[0], rest[1:]
            if v in lists:
                raise MalformedInput(f"line {number}: vertex {v} listed twice")
            if not colours:
                raise MalformedInput(f"line {number}: empty list for vertex {v}")
            lists[v] = colours
        else:
            raise MalformedInput(f"line {number}: unknown record {head!r}")
    if shape is None:
        raise MalformedInput("missing 'parts' line")
    if sorted(lists) != list(range(shape.n)):
        raise MalformedInput(f"expected lists for vertices 0..{shape.n - 1}")
    return shape, ListAssignment.of(lists[v] for v in range(shape.n))


def format_instance(g: PartStructure, L: ListAssignment) -> str:
    out = ["parts " + " ".join(map(str, g.sizes))]
    for v, lst in enumerate(L.lists):
        out.append(" ".join(["list", str(v), *map(str, sorted(lst))]))
    return "\n".join(out) + "\n"


def parse_colouring(text: str) -> dict[int, int]:
    colouring: dict[int, int] = {}
    for number, tokens in _lines(text):
        if tokens[0] != "colour" or len(tokens) != 3:
            raise MalformedInput(f"line {number}: expected 'colour <v> <c>'")
        v, c = _ints(tokens[1:], number)
        if v in colouring:
            raise MalformedInput(f"line {number}: vertex {v} coloured twice")
        colouring[v] = c
    return colouring


def format_colouring(colouring: Mapping[int, int]) -> str:
    return "".join(f"colour {v} {c}\n" for v, c in sorted(colouring.items()))


def parse_classes(text: str, g: PartStructure, L: ListAssignment) -> ClassifiedInstance:
    a_parts: list[int] = []
    d_parts: list[int] = []
    f = {v: len(lst) for v, lst in enumerate(L.lists)}
    for number, tokens in _lines(text):
        head, rest = tokens[0], _ints(tokens[1:], number)
        if head in ("A", "D"):
            (a_parts if head == "A" else d_parts).extend(rest)
        elif head == "f" and len(rest) == 2:
            v, demand = rest
            if v not in f:
                raise MalformedInput(f"line {number}: no vertex {v}")
            f[v] = demand
        else:
            raise MalformedInput(f"line {number}: expected 'A <parts>', 'D <parts>' or 'f <v> <demand>'")
    return ClassifiedInstance.from_shape(g, a_parts, d_parts, f)


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None


# --- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    shape: PartStructure
    verdict: str
    nodes: int = 0
    seconds: float = 0.0
    witness: str | None = None


@dataclass
class Report:
    command: str
    config: list[tuple[str, str]] = field(default_factory=list)
    rows: list[ReportRow] = field(default_factory=list)
    outcome: str = "PASS"
    notes: list[str] = field(default_factory=list)

    def sorted_rows(self) -> list[ReportRow]:
        return sorted(self.rows, key=lambda r: r.shape.sizes)


COLUMNS = ("shape", "verdict", "nodes", "seconds", "witness")


def _cells(row: ReportRow) -> tuple[str, ...]:
    shape = ",".join(map(str, row.shape.sizes))
    return (shape, row.verdict, str(row.nodes), f"{row.seconds:.3f}", row.witness or "-")


def emit_report(report: Report, fmt: str = "text") -> bytes:
    """Render a report; output depends only on the report's contents."""
    buf = io.StringIO()
    rows = [_cells(r) for r in report.sorted_rows()]
    if fmt == "tsv":
        buf.write(f"#command\t{report.command}\n")
        for key, value in report.config:
            buf.write(f"#{key}\t{value}\n")
        buf.write(f"#outcome\t{report.outcome}\n")
        for note in report.notes:
            buf.write(f"#note\t{note}\n")
        buf.write("\t".join(COLUMNS) + "\n")
        for cells in rows:
            buf.write("\t".join(cells) + "\n")
    elif fmt == "text":
        buf.write(f"command: {report.command}\n")
        for key, value in report.config:
            buf.write(f"{key}: {value}\n")
        buf.write(f"outcome: {report.outcome}\n")
        for note in report.notes:
            buf.write(f"note: {note}\n")
        widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(COLUMNS)]
        for cells in [COLUMNS, *rows]:
            buf.write("  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip() + "\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return buf.getvalue().encode()
