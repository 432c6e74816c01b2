"""Graph files (JSON) and CSV output.

A graph file looks like::

    {
      "vertices": [{"id": "a", "alpha": 0.0}, {"id": "b", "alpha": "inf"}],
      "edges": [{"tail": "a", "head": "b", "length": 1.0}],
      "potential": {"kind": "constant", "per_edge": [0.0]}
    }

Vertex ids may be strings or integers; edges refer to them by id. The
``potential`` block is optional (default ``q = 0``). ``per_edge`` holds one
number per edge for ``constant``, and one list per edge for ``poly``
(ascending coefficients) and ``samples`` (uniform nodal values).
The JSON schema lives in ``docs/graph.schema.json``.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .graph import GraphError, MetricGraph, build_graph
from .potential import KINDS, Potential, PotentialError

SIG_DIGITS = 12


class GraphFileError(ValueError):
    """Schema violation; the message starts with the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _number(value, path, allow_inf=False) -> float:
    if allow_inf and isinstance(value, str) and value.strip().lower() in ("inf", "infinity"):
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        expected = 'a number or "inf"' if allow_inf else "a number"
        raise GraphFileError(path, f"expected {expected}, got {value!r}")
    x = float(value)
    if math.isnan(x) or (not allow_inf and math.isinf(x)):
        raise GraphFileError(path, f"expected a finite number, got {value!r}")
    return x


def _require(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise GraphFileError(path, f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise GraphFileError(f"{path}.{key}", "missing required field")
    return obj[key]


def _list(value, path) -> list:
    if not isinstance(value, list):
        raise GraphFileError(path, f"expected a list, got {type(value).__name__}")
    return value


def graph_from_dict(doc: dict) -> tuple[MetricGraph, Potential]:
    if not isinstance(doc, dict):
        raise GraphFileError("$", "top level must be an object")
    verts = _list(_require(doc, "vertices", "$"), "vertices")
    if not verts:
        raise GraphFileError("vertices", "at least one vertex is required")
    index: dict = {}
    alphas = []
    for i, v in enumerate(verts):
        path = f"vertices[{i}]"
        vid = _require(v, "id", path)
        if isinstance(vid, bool) or not isinstance(vid, (int, str)):
            raise GraphFileError(f"{path}.id", "must be a string or an integer")
        if vid in index:
            raise GraphFileError(f"{path}.id", f"duplicate vertex id {vid!r}")
        index[vid] = i
        alpha = v.get("alpha", 0.0)
        alphas.append(_number(alpha, f"{path}.alpha", allow_inf=True))
    edges = []
    for i, e in enumerate(_list(_require(doc, "edges", "$"), "edges")):
        path = f"edges[{i}]"
        ends = []
        for key in ("tail", "head"):
            vid = _require(e, key, path)
            if isinstance(vid, bool) or vid not in index:
                raise GraphFileError(f"{path}.{key}", f"unknown vertex id {vid!r}")
            ends.append(index[vid])
        length = _number(_require(e, "length", path), f"{path}.length")
        if length <= 0:
            raise GraphFileError(f"{path}.length", f"must be positive, got {length!r}")
        edges.append((ends[0], ends[1], length))
    try:
        G = build_graph(len(verts), edges, alphas)
    except GraphError as exc:
        raise GraphFileError("$", str(exc)) from None
    return G, _potential_from_dict(doc.get("potential"), G)


def _potential_from_dict(block, G: MetricGraph) -> Potential:
    if block is None:
        return Potential.zero(G)
    kind = _require(block, "kind", "potential")
    if kind not in KINDS:
        raise GraphFileError("potential.kind", f"expected one of {list(KINDS)}, got {kind!r}")
    per_edge = _list(_require(block, "per_edge", "potential"), "potential.per_edge")
    if len(per_edge) != G.n_edges:
        raise GraphFileError("potential.per_edge",
                             f"expected {G.n_edges} entries (one per edge), got {len(per_edge)}")
    data = []
    for e, item in enumerate(per_edge):
        path = f"potential.per_edge[{e}]"
        if kind == "constant":
            data.append(_number(item, path))
        else:
            vals = _list(item, path)
            data.append([_number(x, f"{path}[{j}]") for j, x in enumerate(vals)])
    try:
        if kind == "constant":
            return Potential.constant(G, data)
        if kind == "poly":
            return Potential.poly(G, data)
        return Potential.samples(G, data)
    except PotentialError as exc:
        raise GraphFileError("potential.per_edge", str(exc)) from None


def parse_graph_file(path) -> tuple[MetricGraph, Potential]:
    """Read a graph file. Raises :class:`GraphFileError` with a field path."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return graph_from_dict(doc)


def graph_to_dict(G: MetricGraph, q: Potential | None = None) -> dict:
    doc = {
        "vertices": [{"id": v, "alpha": "inf" if a == math.inf else float(a)}
                     for v, a in enumerate(G.couplings)],
        "edges": [{"tail": e.tail, "head": e.head, "length": float(e.length)} for e in G.edges],
    }
    if q is not None and not q.is_zero:
        if q.kind == "constant":
            per_edge = [float(d) for d in q.data]
        else:
            per_edge = [np.asarray(d, dtype=float).tolist() for d in q.data]
        doc["potential"] = {"kind": q.kind, "per_edge": per_edge}
    return doc


def write_graph_file(path, G: MetricGraph, q: Potential | None = None):
    Path(path).write_text(json.dumps(graph_to_dict(G, q), indent=2) + "\n")


# -- CSV --------------------------------------------------------------------

def fmt(x) -> str:
    """12 significant digits; ``inf``/``nan`` spelled out; ints and strings as-is."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.{SIG_DIGITS}g}"
    return str(x)


def write_csv(stream, header: list[str], rows, comment: str | None = None):
    """Write ``rows`` under ``header``; ``comment`` becomes a leading ``# ...`` line."""
    if comment:
        stream.write(f"# {comment}\n")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    """Header and rows of a CSV written by :func:`write_csv` (comment lines skipped)."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]
