"""Deterministic file emission: JSON artifacts and CSV tables.

Identical inputs must produce byte-identical files, so JSON is written with
sorted keys and fixed separators and CSV floats are formatted at 17
significant digits (shortest round-trip is not stable across float paths;
a fixed width is).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from pydantic import BaseModel


def format_float(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.17g}"
    return str(x)


def dump_json(path: Path, doc: BaseModel | dict) -> None:
    data = doc.model_dump(mode="json") if isinstance(doc, BaseModel) else doc
    path.write_text(json.dumps(data, sort_keys=True, indent=2, allow_nan=True) + "\n")


def dump_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
