"""CSV, graymap and metadata-sidecar writers."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import __version__

LOG_FLOOR = 1e-6


def fmt_float(x) -> str:
    """Shortest decimal string that round-trips the float64 value."""
    return repr(float(x))


def write_csv(path: Path, header: Optional[Sequence[str]], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(header)
        for row in rows:
            w.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return path


def write_matrix_csv(path: Path, matrix: np.ndarray) -> Path:
    return write_csv(path, None, ([fmt_float(v) for v in row] for row in matrix))


def read_csv_columns(path: Path) -> dict:
    """Columns of a headed CSV; numeric columns as float arrays, others as strings."""
    with Path(path).open() as fh:
        r = csv.reader(fh)
        header = next(r)
        cols = {h: [] for h in header}
        for row in r:
            for h, v in zip(header, row):
                cols[h].append(v)
    out = {}
    for h, v in cols.items():
        try:
            out[h] = np.array([float(x) if x else math.nan for x in v])
        except ValueError:
            out[h] = np.array(v)
    return out


def write_pgm(path: Path, matrix: np.ndarray, floor: float = LOG_FLOOR) -> Path:
    """8-bit binary graymap with log-scaled intensity, floored at ``floor * max``."""
    m = np.asarray(matrix, dtype=float)
    top = m.max()
    if top > 0:
        scaled = np.log10(np.clip(m / top, floor, 1.0)) / -math.log10(floor) + 1.0
    else:
        scaled = np.zeros_like(m)
    img = np.round(scaled * 255).astype(np.uint8)
    h, w = img.shape
    with Path(path).open("wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
    return path


def read_pgm(path: Path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = (int(v) for v in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


def write_sidecar(path: Path, command: str, config_text: str, **meta) -> Path:
    """Write ``<path>.meta.json`` next to an output file."""
    side = Path(str(path) + ".meta.json")
    doc = {"tool": "ghostpin", "version": __version__, "command": command, "config": config_text}
    doc.update(meta)
    side.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")
    return side


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")
