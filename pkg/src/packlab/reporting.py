"""Deterministic JSON/CSV report writers shared by the experiment runners.

JSON is emitted with sorted keys and fixed separators so identical configs
and seeds produce byte-identical files regardless of worker count.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from fractions import Fraction
from pathlib import Path

SCHEMA_VERSION = 1


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def content_hash(obj) -> str:
    return hashlib.sha256(to_json(obj).encode()).hexdigest()[:16]


def report_envelope(kind: str, config: dict, records: list[dict], summary: dict) -> dict:
    from . import __version__

    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "config": _jsonable(config),
        "config_hash": content_hash(config),
        "version": __version__,
        "records": _jsonable(records),
        "summary": _jsonable(summary),
    }


def write_json(path: str | Path, report: dict) -> None:
    Path(path).write_text(to_json(report) + "\n")


def records_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    if records:
        fieldnames = list(records[0].keys())
        writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({k: _csv_cell(v) for k, v in rec.items()})
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    if hasattr(v, "item"):
        return v.item()
    return v


def write_csv(path: str | Path, records: list[dict]) -> None:
    Path(path).write_text(records_csv(records))
