"""File formats: JSON codes, alist matrices, edge-list graphs, point clouds.

The JSON code format stores row supports rather than dense rows:

    { "n": int, "hx": [[col, ...], ...], "hz": [[...], ...], "label": str }

with 0-based, strictly increasing column indices per row. The alist
format is the usual one for a single parity-check matrix: "n m" on the
first line (columns, then rows), the maximum column and row degrees,
the per-column and per-row degree lists, then one adjacency line per
column and per row with 1-based indices and no zero padding. Graphs for
cone building are plain edge lists, one "u v" pair of 0-based vertex
ids per line; blank lines and "#" comments are ignored. Layer embeddings
export as point clouds: a "# plane <kind> <index>" header per source
plane followed by "kind x y z" lines with kind X, Q, or Z.

All writers emit a trailing newline and depend only on their inputs, so
repeated runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import networkx as nx

from qweight.css import CssCode
from qweight.gf2 import BitMatrix
from qweight.layer_code import LayerEmbedding

_KIND_LETTER = {"qubit": "Q", "x_check": "X", "z_check": "Z"}


def code_to_json(code: CssCode) -> dict:
    """JSON-ready dict in the row-support code format."""
    return {
        "n": code.n,
        "hx": [code.hx.row_support(i) for i in range(code.hx.rows)],
        "hz": [code.hz.row_support(i) for i in range(code.hz.rows)],
        "label": code.label,
    }


def _side_from_json(rows, n: int, name: str) -> BitMatrix:
    if not isinstance(rows, list):
        raise ValueError(f"{name} must be a list of rows")
    for r, sup in enumerate(rows):
        if not isinstance(sup, list):
            raise ValueError(f"{name} row {r} must be a list of column indices")
        for a, b in zip(sup, sup[1:]):
            if a >= b:
                raise ValueError(
                    f"{name} row {r} is not strictly increasing at {a}, {b}"
                )
        for c in sup:
            if not isinstance(c, int) or isinstance(c, bool) or not 0 <= c < n:
                raise ValueError(f"{name} row {r} has invalid column {c!r}")
    return BitMatrix.from_support(len(rows), n, rows)


def code_from_json(obj) -> CssCode:
    """Parse the row-support dict; raises ValueError on any format issue."""
    if not isinstance(obj, dict):
        raise ValueError("code file must hold a JSON object")
    missing = {"n", "hx", "hz"} - obj.keys()
    if missing:
        raise ValueError(f"code object lacks keys: {sorted(missing)}")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    label = obj.get("label", "")
    if not isinstance(label, str):
        raise ValueError("label must be a string")
    hx = _side_from_json(obj["hx"], n, "hx")
    hz = _side_from_json(obj["hz"], n, "hz")
    return CssCode(hx, hz, label=label)


def load_code(path) -> CssCode:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"not valid JSON: {err}") from err
    return code_from_json(obj)


def dump_code(code: CssCode, path) -> None:
    Path(path).write_text(json.dumps(code_to_json(code), indent=2) + "\n")


def load_alist(path) -> BitMatrix:
    """Read a single matrix in alist layout (see module docstring)."""
    fields = Path(path).read_text().split()
    pos = 0

    def take(count: int, what: str) -> list[int]:
        nonlocal pos
        chunk = fields[pos:pos + count]
        if len(chunk) < count:
            raise ValueError(f"alist file truncated while reading {what}")
        pos += count
        try:
            return [int(tok) for tok in chunk]
        except ValueError as err:
            raise ValueError(f"alist {what} holds a non-integer") from err

    n, m = take(2, "size header")
    if n < 0 or m < 0:
        raise ValueError(f"negative alist dimensions {n} x {m}")
    take(2, "degree header")
    col_deg = take(n, "column degrees")
    row_deg = take(m, "row degrees")
    out = BitMatrix.zeros(m, n)
    for j in range(n):
        for r in take(col_deg[j], f"column {j} adjacency"):
            if not 1 <= r <= m:
                raise ValueError(f"column {j} references row {r}, have {m}")
            out.set(r - 1, j, 1)
    for i in range(m):
        sup = take(row_deg[i], f"row {i} adjacency")
        if sorted(c - 1 for c in sup) != out.row_support(i):
            raise ValueError(f"row {i} adjacency disagrees with the columns")
    if fields[pos:]:
        raise ValueError("trailing data after the alist adjacency lists")
    return out


def dump_alist(m: BitMatrix, path) -> None:
    cols = [[] for _ in range(m.cols)]
    rows = []
    for i in range(m.rows):
        sup = m.row_support(i)
        rows.append(sup)
        for j in sup:
            cols[j].append(i)
    lines = [
        f"{m.cols} {m.rows}",
        f"{max((len(c) for c in cols), default=0)} "
        f"{max((len(r) for r in rows), default=0)}",
        " ".join(str(len(c)) for c in cols),
        " ".join(str(len(r)) for r in rows),
    ]
    lines += [" ".join(str(i + 1) for i in c) for c in cols]
    lines += [" ".join(str(j + 1) for j in r) for r in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def load_edge_list(path) -> nx.Graph:
    """Graph from "u v" lines, 0-based; isolated vertices cannot be
    expressed, which is fine for cone inputs (they must be connected)."""
    g = nx.Graph()
    for ln, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {ln}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as err:
            raise ValueError(f"line {ln}: vertex ids must be integers") from err
        if u < 0 or v < 0:
            raise ValueError(f"line {ln}: vertex ids must be nonnegative")
        g.add_edge(u, v)
    return g


def write_point_cloud(embedding: LayerEmbedding, path) -> None:
    """Point-cloud text for a layer embedding, grouped by source plane."""
    by_plane: dict = {}
    for cell, plane in embedding.layer_index.items():
        by_plane.setdefault(plane, []).append(cell)
    lines = []
    for plane, cells in by_plane.items():
        lines.append(f"# plane {plane[0]} {plane[1]}")
        for cell in cells:
            x, y, z = embedding.coords[cell]
            lines.append(f"{_KIND_LETTER[cell[0]]} {x} {y} {z}")
    Path(path).write_text("\n".join(lines) + "\n")
