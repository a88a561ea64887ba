"""Canonical output encodings shared by the CLI and the HTTP service.

JSON numbers keep full precision (shortest round-trip representation);
display tables round to 4 significant digits. The service reuses
``canonical_json_bytes`` so computation endpoints match the CLI output
byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math

GRID_HEADER = ["lambda1", "lambda2", "risk_launch", "decision"]


def canonical_json_bytes(d: dict) -> bytes:
    return (json.dumps(d, indent=2) + "\n").encode()


def sig4(value) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.4g}"


def render_table(rows: list[list]) -> str:
    cells = [[sig4(v) for v in row] for row in rows]
    widths = [max(len(r[c]) for r in cells) for c in range(len(cells[0]))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def csv_text(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(value):
    if isinstance(value, float):  # includes numpy scalars
        return repr(float(value))
    return value


def grid_rows(points) -> list[list]:
    rows: list[list] = [list(GRID_HEADER)]
    for p in points:
        risk = "" if math.isnan(p.risk_launch) else p.risk_launch
        rows.append([p.lambda1, p.lambda2, risk, p.decision])
    return rows
