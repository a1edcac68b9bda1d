"""Canonical JSON and CSV writers shared by the CLI and tests.

Artifacts must be byte-identical across runs with the same config, so
serialization is timestamp-free, field order is fixed by construction
order, and floats use Python's shortest round-trip repr.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=True) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(canonical_json(obj), encoding="utf-8")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def config_hash(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, allow_nan=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


def format_float(x: float) -> str:
    return f"{x:.17g}"


def write_sweep_csv(path, rows, header: str = "s,beta") -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(format_float(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_report_csv(path, report) -> None:
    lines = ["s,empirical,certified,violation,witness_fn"]
    bad = {v["s"] for v in report.violations if "s" in v}
    for s, e, c, name in zip(
        report.s_grid, report.empirical, report.certified, report.witnesses
    ):
        lines.append(
            f"{format_float(s)},{format_float(e)},{format_float(c)},"
            f"{int(s in bad)},{name}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
