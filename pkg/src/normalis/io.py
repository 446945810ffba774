"""Point-set files (JSON) and graph exports (JSON, OFF, SVG)."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .exceptions import NormalisError, ParseError
from .geometry import PointSet, Space, Tolerance, as_space
from .graph import GeoGraph

_TOL_KEYS = ("boundary_eps", "unit_norm", "concyclic_eps")


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite coordinate {x!r}")
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i] in " \t\r\n":
        i += 1
    return i


def _array_element_offsets(text: str, start: int) -> list[int]:
    """Offsets of the elements of the JSON array whose ``[`` is at ``start``."""
    dec = json.JSONDecoder()
    i = _skip_ws(text, start + 1)
    out = []
    if i < len(text) and text[i] == "]":
        return out
    while i < len(text):
        out.append(i)
        _, i = dec.raw_decode(text, i)
        i = _skip_ws(text, i)
        if i >= len(text) or text[i] == "]":
            break
        i = _skip_ws(text, i + 1)  # the comma
    return out


def _points_offsets(text: str) -> list[int]:
    """Best-effort offsets of each entry of the top-level ``points`` array."""
    dec = json.JSONDecoder()
    i = _skip_ws(text, 0)
    if i >= len(text) or text[i] != "{":
        return []
    i = _skip_ws(text, i + 1)
    while i < len(text) and text[i] != "}":
        key, i = dec.raw_decode(text, i)
        i = _skip_ws(text, i)
        i = _skip_ws(text, i + 1)  # the colon
        if key == "points" and text[i] == "[":
            return _array_element_offsets(text, i)
        _, i = dec.raw_decode(text, i)
        i = _skip_ws(text, i)
        if text[i] == ",":
            i = _skip_ws(text, i + 1)
    return []


def loads_pointset(text: str) -> tuple[PointSet, dict]:
    """Parse a point-set document; returns ``(points, meta)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1, 1)

    def where(idx=None):
        offs = _points_offsets(text)
        if idx is not None and idx < len(offs):
            return _line_col(text, offs[idx])
        return (1, 1)

    for key in ("space", "points"):
        if key not in doc:
            raise ParseError(f"missing required key {key!r}", 1, 1)
    try:
        space = as_space(doc["space"])
    except (ValueError, NormalisError):
        raise ParseError(f"unknown space {doc['space']!r}", *_line_col(text, text.find('"space"'))) from None
    pts = doc["points"]
    if not isinstance(pts, list):
        raise ParseError("'points' must be an array", *_line_col(text, text.find('"points"')))
    for idx, p in enumerate(pts):
        if (
            not isinstance(p, list)
            or len(p) != space.dim
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)
        ):
            raise ParseError(f"point {idx} must be a list of {space.dim} numbers", *where(idx))
    overrides = doc.get("tolerance") or {}
    if not isinstance(overrides, dict) or set(overrides) - set(_TOL_KEYS):
        raise ParseError(f"tolerance keys must be among {_TOL_KEYS}", *_line_col(text, text.find('"tolerance"')))
    try:
        tol = Tolerance().with_overrides(**overrides)
        V = PointSet.from_array(np.array(pts, dtype=float).reshape(-1, space.dim), space, tol)
    except NormalisError as exc:
        raise ParseError(str(exc), *where()) from exc
    meta = doc.get("meta") or {}
    return V, meta


def read_pointset(path) -> tuple[PointSet, dict]:
    return loads_pointset(Path(path).read_text())


def dumps_pointset(V: PointSet, meta: dict | None = None) -> str:
    """Deterministic JSON with one point per line."""
    rows = ",\n".join("    [" + ", ".join(fmt(c) for c in p) + "]" for p in V.points)
    tol = {}
    default = Tolerance()
    for key in _TOL_KEYS:
        if getattr(V.tol, key) != getattr(default, key):
            tol[key] = getattr(V.tol, key)
    parts = [f'  "space": {json.dumps(V.space.value)}', f'  "points": [\n{rows}\n  ]']
    if tol:
        parts.append('  "tolerance": {' + ", ".join(f'"{k}": {fmt(v)}' for k, v in tol.items()) + "}")
    if meta:
        parts.append('  "meta": ' + json.dumps(meta, sort_keys=True))
    return "{\n" + ",\n".join(parts) + "\n}\n"


def write_pointset(V: PointSet, path, meta: dict | None = None) -> None:
    Path(path).write_text(dumps_pointset(V, meta))


# --------------------------------------------------------------------- export


def graph_json(V: PointSet, G: GeoGraph, kind: str, extra: dict | None = None) -> str:
    doc = {
        "space": V.space.value,
        "graph": kind,
        "n": V.n,
        "n_edges": G.n_edges,
        "vertices": [[float(c) for c in p] for p in V.points],
        "edges": [list(e) for e in G.edges],
    }
    if G.colors:
        doc["colors"] = {f"{i}-{j}": c for (i, j), c in sorted(G.colors.items())}
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def to_off(V: PointSet, faces, comment: str = "") -> str:
    """OFF polyhedron; plane points get ``z = 0``."""
    X = V.points if V.space.dim == 3 else np.c_[V.points, np.zeros(V.n)]
    lines = ["OFF"]
    if comment:
        lines.append(f"# {comment}")
    n_edges = len({tuple(sorted((f[i], f[(i + 1) % len(f)]))) for f in faces for i in range(len(f))})
    lines.append(f"{V.n} {len(faces)} {n_edges}")
    lines += [" ".join(fmt(c) for c in p) for p in X]
    lines += [" ".join(str(v) for v in (len(f), *f)) for f in faces]
    return "\n".join(lines) + "\n"


_STROKE = {
    "red": 'stroke="#c0392b" stroke-dasharray="6,4"',
    "blue": 'stroke="#1f4e9c"',
    None: 'stroke="#222222"',
}


def to_svg(V: PointSet, G: GeoGraph, size: int = 480, margin: int = 24) -> str:
    """Straight-line drawing; red edges dashed, blue and uncoloured solid.

    Points in 3D are drawn by orthographic projection onto the xy-plane.
    """
    P = V.points[:, :2]
    lo, hi = P.min(axis=0), P.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    scale = (size - 2 * margin) / span

    def xy(p):
        x = margin + (p[0] - lo[0]) * scale
        y = size - margin - (p[1] - lo[1]) * scale
        return f"{x:.3f}", f"{y:.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for i, j in G.edges:
        color = G.colors.get((i, j))
        (x1, y1), (x2, y2) = xy(P[i]), xy(P[j])
        out.append(
            f'<line class="edge {color or "plain"}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
            f'{_STROKE[color]} stroke-width="2"/>'
        )
    for k, p in enumerate(P):
        x, y = xy(p)
        out.append(f'<circle class="vertex" cx="{x}" cy="{y}" r="4" fill="black"><title>{k}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
