"""Persistence: PRSK1 binary ensembles, CSV ensembles, JSON reports.

PRSK1 layout (all little-endian)::

    b"PRSK1"
    uint64  n_paths
    uint64  n_steps                  grid has n_steps + 1 points
    float64 grid[n_steps + 1]
    float64 probs[n_paths]
    float64 values[n_paths, n_steps + 1]   row-major
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import struct

import numpy as np

from .paths import PathEnsemble, TimeGrid

__all__ = [
    "MAGIC",
    "CorruptEnsembleFile",
    "write_prsk",
    "read_prsk",
    "write_csv",
    "read_csv",
    "save_ensemble",
    "load_ensemble",
    "sha256_file",
    "dumps_json",
]

MAGIC = b"PRSK1"
_HEADER = struct.Struct("<5sQQ")


class CorruptEnsembleFile(ValueError):
    pass


def write_prsk(path, e: PathEnsemble) -> None:
    n, m = e.values.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, n, m - 1))
        fh.write(np.ascontiguousarray(e.grid.t, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(e.probs, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(e.values, dtype="<f8").tobytes())


def read_prsk(path) -> PathEnsemble:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise CorruptEnsembleFile("file shorter than the PRSK1 header")
    magic, n, steps = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise CorruptEnsembleFile(f"bad magic {magic!r}")
    m = steps + 1
    expected = _HEADER.size + 8 * (m + n + n * m)
    if len(blob) != expected:
        raise CorruptEnsembleFile(f"expected {expected} bytes, found {len(blob)}")
    body = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size)
    grid, probs, values = body[:m], body[m:m + n], body[m + n:].reshape(n, m)
    try:
        return PathEnsemble(TimeGrid(grid.astype(float)), values.astype(float), probs.astype(float))
    except ValueError as exc:
        raise CorruptEnsembleFile(str(exc)) from exc


def write_csv(path, e: PathEnsemble) -> None:
    """One row per path; the header row holds the grid times."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([format(t, ".17g") for t in e.grid.t])
        for row in e.values:
            w.writerow([format(v, ".17g") for v in row])


def read_csv(path, probs=None) -> PathEnsemble:
    """Inverse of ``write_csv``; paths are equally likely unless ``probs`` is given."""
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.shape[0] < 2:
        raise CorruptEnsembleFile("CSV needs a header row and at least one path")
    return PathEnsemble.from_arrays(data[1:], t=data[0], probs=probs)


def save_ensemble(path, e: PathEnsemble) -> None:
    if str(path).lower().endswith(".csv"):
        write_csv(path, e)
    else:
        write_prsk(path, e)


def load_ensemble(path) -> PathEnsemble:
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
    if head == MAGIC:
        return read_prsk(path)
    if str(path).lower().endswith(".csv"):
        return read_csv(path)
    raise CorruptEnsembleFile(f"{path}: neither PRSK1 nor CSV")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _encode(obj, indent, level):
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # non-finite values become strings to keep the document valid JSON
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return format(x, ".17g")
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return _json_str(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{_json_str(str(k))}: {_encode(v, indent, level + 1)}" for k, v in sorted(obj.items())]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        return "[" + pad + ("," + pad).join(_encode(v, indent, level + 1) for v in seq) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _json_str(s: str) -> str:
    return json.dumps(s)


def dumps_json(obj, indent: int = 2) -> str:
    """Deterministic JSON: sorted keys, floats with 17 significant digits,
    infinities as the strings ``"inf"`` / ``"-inf"``."""
    return _encode(obj, indent, 0) + "\n"


def json_float(v) -> float:
    """Read back a float written by ``dumps_json``."""
    return float(v)
