"""Atomic file output and the CSV dialect used by every emitter.

CSV: '.' decimal, header row, LF line endings, fixed ``repr``-free number
formatting so equal inputs give byte-identical files.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np


def atomic_write_text(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x, precision: int) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), f".{precision}g")


def format_csv(header, rows, precision: int = 12) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x, precision) for x in row))
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows, precision: int = 12):
    atomic_write_text(path, format_csv(header, rows, precision))


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default)


def write_json(path, obj):
    atomic_write_text(path, dumps(obj) + "\n")
