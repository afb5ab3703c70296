"""Plain-text formats: the delimited output schema and ``key=value`` config files."""
from __future__ import annotations

import csv
import io
import numbers
from pathlib import Path

SCHEMA = ("p", "alpha", "k", "x", "value", "classification")
VERIFY_SCHEMA = ("claim_id", "lambda", "alpha", "status", "worst_violation", "witness_x", "npoints", "note")


def fmt(value) -> str:
    """Shortest round-tripping decimal (at most 17 significant digits); '' for None."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral) and not isinstance(value, bool):
        return str(value)
    v = float(value)
    return "0.0" if v == 0.0 else repr(v)


def _escape(field: str) -> str:
    if any(c in field for c in ',"\n'):
        return '"' + field.replace('"', '""') + '"'
    return field


def render_csv(header, rows) -> str:
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} fields, header has {len(header)}")
        out.write(",".join(_escape(fmt(v)) for v in row) + "\n")
    return out.getvalue()


def write_csv(path, header, rows) -> None:
    text = render_csv(header, rows)
    # newline="" keeps '\n' line endings on every platform
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def read_csv(path):
    """Parse a file written by :func:`write_csv` into (header, rows of strings)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def read_config(path) -> dict:
    """Read ``key=value`` lines; ``#`` comments and blank lines are ignored.

    Keys are normalised to identifiers (``p``, ``alpha``, ``monomial``, ...).
    """
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip().lstrip("-").replace("-", "_")
        out[key] = value.strip()
    return out
