"""Deterministic, atomic artifact writers and schema-checked readers."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .exceptions import SchemaMismatch

__all__ = [
    "format_number",
    "atomic_write_text",
    "write_csv",
    "read_csv",
    "write_json",
    "read_json",
]


def format_number(value):
    """Shortest round-trip text for a number; integers stay integral."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` via a temporary file and ``os.replace``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) if not isinstance(v, str) else v for v in row])
    return atomic_write_text(path, buf.getvalue())


def read_csv(path, header):
    """Read a CSV written by :func:`write_csv`; the header must match exactly."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            found = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{path}: empty file") from None
        if list(found) != list(header):
            raise SchemaMismatch(f"{path}: expected columns {list(header)}, found {found}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise SchemaMismatch(f"{path}:{lineno}: expected {len(header)} fields")
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise SchemaMismatch(f"{path}:{lineno}: non-numeric field") from None
    return rows


def _clean(obj):
    # json cannot carry inf/nan; store them as strings
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return format_number(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def write_json(path, payload):
    text = json.dumps(_clean(payload), indent=2, sort_keys=True) + "\n"
    return atomic_write_text(path, text)


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{path}: not valid JSON ({exc.msg})") from None
