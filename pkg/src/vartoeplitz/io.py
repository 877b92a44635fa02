"""
Plain-text exports and imports.

CSV files start with one header comment ``# vartoeplitz:<schema> v<version>``
followed by a column-name row.  JSON documents carry the same schema name and
version as top-level keys.  Floats are written with 17 significant digits so
identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

from .grid import TimeGrid, ratios_of

__all__ = [
    "SCHEMA_VERSION",
    "header",
    "write_grid_csv",
    "write_ratios_csv",
    "read_ratios_csv",
    "write_matrix_coo",
    "write_matrix_dense",
    "write_spectrum_csv",
    "read_spectrum_csv",
    "write_symbol_csv",
    "write_quantiles_csv",
    "write_records_csv",
    "dump_json",
    "load_json",
    "parse_config",
]

SCHEMA_VERSION = 1

# report columns shared by the JSON and CSV report exports
REPORT_FIELDS = ("n", "l1", "sup", "count", "predicted", "lambda_min", "lambda_max")


def header(schema: str) -> str:
    return f"# vartoeplitz:{schema} v{SCHEMA_VERSION}\n"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _table(schema: str, columns, rows) -> str:
    buf = _io.StringIO()
    buf.write(header(schema))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, dest=None) -> str:
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)
    return text


def write_grid_csv(grid: TimeGrid, dest=None) -> str:
    """Columns ``i, t_i, r_i``; ``r_i`` is empty for ``i < 2``."""
    r = ratios_of(grid)
    rows = [(i, t, r[i - 2] if i >= 2 else None) for i, t in enumerate(grid.points)]
    return _emit(_table("grid", ("i", "t_i", "r_i"), rows), dest)


def write_ratios_csv(r, dest=None) -> str:
    rows = [(i + 2, v) for i, v in enumerate(np.asarray(r, dtype=float))]
    return _emit(_table("ratios", ("i", "r_i"), rows), dest)


def _rows(src):
    if hasattr(src, "read"):
        text = src.read()
    else:
        text = Path(src).read_text()
    return [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]


def read_ratios_csv(src) -> np.ndarray:
    """
    Read ratios from a CSV with an ``r_i`` (or ``r``) column, a grid export, or
    one bare number per line.
    """
    lines = _rows(src)
    if not lines:
        raise ValueError("no ratio data")
    first = [c.strip() for c in lines[0].split(",")]
    try:
        [float(c) for c in first]
        return np.array([float(line.split(",")[-1]) for line in lines])
    except ValueError:
        pass
    col = next((first.index(k) for k in ("r_i", "r") if k in first), None)
    if col is None:
        raise ValueError(f"no r_i column in header {first}")
    vals = []
    for line in lines[1:]:
        cell = line.split(",")[col].strip()
        if cell:
            vals.append(float(cell))
    return np.array(vals)


def write_matrix_coo(A, dest=None) -> str:
    """Nonzero entries as ``row, col, value`` with 0-based indices, row-major order."""
    A = np.asarray(A.toarray() if hasattr(A, "toarray") else A, dtype=float)
    rr, cc = np.nonzero(A)
    rows = [(int(i), int(j), A[i, j]) for i, j in zip(rr, cc)]
    return _emit(_table("matrix-coo", ("row", "col", "value"), rows), dest)


def write_matrix_dense(A, dest=None) -> str:
    """Whitespace-separated dense rows, for eyeballing small matrices."""
    A = np.asarray(A.toarray() if hasattr(A, "toarray") else A, dtype=float)
    lines = [" ".join(format(v, " .6e") for v in row) for row in A]
    return _emit(header("matrix-dense") + "\n".join(lines) + "\n", dest)


def write_spectrum_csv(sample, dest=None) -> str:
    """Columns ``j, value`` (``j`` from 1, ascending values)."""
    values = np.asarray(getattr(sample, "values", sample), dtype=float)
    kind = getattr(sample, "kind", "eigenvalues")
    return _emit(_table(f"spectrum-{kind}", ("j", "value"),
                        ((j + 1, v) for j, v in enumerate(values))), dest)


def read_spectrum_csv(src) -> np.ndarray:
    lines = _rows(src)
    return np.array([float(line.split(",")[1]) for line in lines[1:]])


def write_symbol_csv(x, theta, values, dest=None) -> str:
    x, theta, values = (np.ravel(np.asarray(v, dtype=float)) for v in np.broadcast_arrays(x, theta, values))
    return _emit(_table("symbol", ("x", "theta", "value"), zip(x, theta, values)), dest)


def write_quantiles_csv(values, dest=None) -> str:
    v = np.sort(np.asarray(values, dtype=float))
    return _emit(_table("quantiles", ("k", "q_k"), ((k + 1, q) for k, q in enumerate(v))), dest)


def write_records_csv(schema: str, records, fields=REPORT_FIELDS, dest=None) -> str:
    rows = [tuple(rec.get(f) for f in fields) for rec in records]
    return _emit(_table(schema, fields, rows), dest)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def dump_json(schema: str, payload: dict, dest=None) -> str:
    doc = {"schema": schema, "version": SCHEMA_VERSION}
    doc.update(_jsonable(payload))
    return _emit(json.dumps(doc, indent=2, sort_keys=False) + "\n", dest)


def load_json(src, schema: str | None = None) -> dict:
    text = src.read() if hasattr(src, "read") else Path(src).read_text()
    doc = json.loads(text)
    if schema is not None and doc.get("schema") != schema:
        raise ValueError(f"expected schema {schema!r}, found {doc.get('schema')!r}")
    if doc.get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('version')!r}")
    return doc


def parse_config(text: str) -> dict[str, str]:
    """
    Flat ``key = value`` (or ``key: value``) lines; ``#`` starts a comment.

    Duplicate keys are an error.  Values stay strings.
    """
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise ValueError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split(sep, 1))
        if not key:
            raise ValueError(f"line {lineno}: empty key")
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out
