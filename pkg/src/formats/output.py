"""
Row tables and reports on a text stream.

Floats are written with repr, the shortest decimal string that parses back
to the same double, so CSV and JSON output re-read without drift.
"""
import csv
import json
import math
from typing import Dict, Iterable, List, Sequence, TextIO

from ..errors import ModelFormatError

FORMATS = ("csv", "json", "text")


def format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)    # "inf", "-inf", "nan"
    return value


def write_rows(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence], fmt: str = "csv"):
    """
    One table. CSV gets a header line, JSON a list of objects keyed by the
    header, text left-aligned columns for reading.
    """
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    elif fmt == "json":
        records = [{k: _jsonable(v) for k, v in zip(header, row)} for row in rows]
        json.dump(records, stream, indent=2)
        stream.write("\n")
    elif fmt == "text":
        cells = [list(header)] + [[format_value(v) for v in row] for row in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
        for r in cells:
            stream.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    else:
        raise ValueError(f"unknown output format '{fmt}', expected one of {FORMATS}")


def _default(value):
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"cannot serialise {type(value).__name__}")


def write_document(stream: TextIO, document: dict):
    json.dump(document, stream, indent=2, default=_default)
    stream.write("\n")


def _parse(value):
    try:
        return float(value)
    except (TypeError, ValueError):
        return value


def read_rows(path: str) -> List[Dict[str, object]]:
    """Read back a table written by write_rows, CSV or JSON by content."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ModelFormatError(f"cannot read table: {e.strerror}", path) from e

    if text.lstrip().startswith("["):
        try:
            records = json.loads(text)
        except json.JSONDecodeError as e:
            raise ModelFormatError(e.msg, f"{path} line {e.lineno}, column {e.colno}") from e
        if not all(isinstance(r, dict) for r in records):
            raise ModelFormatError("expected a list of objects", path)
        return [{k: _parse(v) for k, v in r.items()} for r in records]

    reader = csv.DictReader(text.splitlines())
    if not reader.fieldnames:
        raise ModelFormatError("empty table", path)
    return [{k: _parse(v) for k, v in r.items()} for r in reader]
