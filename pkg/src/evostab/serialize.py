"""Deterministic JSON and CSV emission for reports and series exports.

Floats are written with Python's shortest round-trip repr, so identical
inputs produce byte-identical files. Non-finite values are not valid JSON;
they are mapped to null on the way out (CSV keeps them as inf/-inf text).
"""

from __future__ import annotations

import dataclasses
import json
import math
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

import numpy as np


def json_ready(obj: Any) -> Any:
    """Recursively convert arrays, numpy scalars and dataclasses to JSON types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return json_ready(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [json_ready(v) for v in obj.tolist()]
    # bool before int: Python bools are ints and would turn into 0/1
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def dump_report(report: dict, path: str | Path) -> None:
    text = json.dumps(json_ready(report), indent=2, allow_nan=False)
    Path(path).write_text(text + "\n")


def write_series_csv(
    path: str | Path,
    header: tuple[str, str],
    times: Iterable[float],
    values: Iterable[float],
) -> None:
    lines = [f"{header[0]},{header[1]}"]
    for t, v in zip(times, values):
        lines.append(f"{repr(float(t))},{repr(float(v))}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_report_schema() -> dict:
    text = resources.files("evostab").joinpath("report_schema.json").read_text()
    return json.loads(text)
