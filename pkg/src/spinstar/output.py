"""CSV and JSON writers for capacity tables."""
from __future__ import annotations

import io
import json
import sys
from contextlib import contextmanager
from typing import Iterable, Sequence

CSV_DIGITS = 12


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.{CSV_DIGITS}g}"
    return str(x)


def render_csv(columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(row[c]) for c in columns) + "\n")
    return buf.getvalue()


def render_json(columns: Sequence[str], rows: Iterable[dict], **extra) -> str:
    # json emits repr() floats, which round-trip exactly
    doc = {"columns": list(columns), "rows": [dict(r) for r in rows]}
    doc.update(extra)
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


@contextmanager
def open_output(path: str | None):
    if path in (None, "", "-"):
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        yield fh
