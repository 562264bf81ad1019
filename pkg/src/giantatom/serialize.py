"""Deterministic text serialisation of run results."""
from __future__ import annotations

import io
import json
import math
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    """Shortest round-trip decimal form of a float (at most 17 significant digits).

    ``repr`` is locale-independent and always uses '.'.
    """
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"  # folds -0.0 so that sign noise cannot break byte identity
    return repr(x)


def _header_lines(meta: dict) -> list[str]:
    lines = []
    for key in sorted(meta):
        val = meta[key]
        lines.append(f"# {key} = {json.dumps(_plain(val), sort_keys=True)}")
    return lines


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value  # enums
    return obj


def csv_text(columns: list[str], rows, meta: dict | None = None) -> str:
    buf = io.StringIO()
    for line in _header_lines(meta or {}):
        buf.write(line + "\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_text(text: str, out) -> None:
    """Write to ``out`` (a path) or to stdout when ``out`` is None or '-'."""
    if out is None or str(out) == "-":
        import sys
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_csv(path):
    """Parse a file written by :func:`csv_text` into (meta, columns, array)."""
    meta, cols, rows = {}, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            meta[key.strip()] = json.loads(val)
        elif cols is None:
            cols = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    return meta, cols, np.array(rows)


PLOT_TEMPLATE = '''"""Plot a data file written by ga-scatter (requires matplotlib)."""
import sys

import matplotlib.pyplot as plt
import numpy as np

path = sys.argv[1] if len(sys.argv) > 1 else {path!r}
with open(path) as fh:
    lines = [ln for ln in fh if not ln.startswith("#")]
cols = lines[0].strip().split(",")
data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:] if ln.strip()])
if {is_map!r}:
    xs, ys = np.unique(data[:, 0]), np.unique(data[:, 1])
    grid = data[:, 2].reshape(len(xs), len(ys))
    plt.pcolormesh(ys, xs, grid, shading="auto")
    plt.xlabel(cols[1])
    plt.ylabel(cols[0])
    plt.colorbar(label=cols[2])
else:
    for j, name in enumerate(cols[1:], 1):
        plt.plot(data[:, 0], data[:, j], label=name)
    plt.xlabel(cols[0])
    plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''


def plot_script(data_path: str, is_map: bool) -> str:
    return PLOT_TEMPLATE.format(path=str(data_path), is_map=bool(is_map))
