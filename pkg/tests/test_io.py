import json
import math

import numpy as np
import pytest

from qgspec.graph import graph_invariants
from qgspec.io import (GraphFileError, fmt, graph_from_dict, graph_to_dict, parse_graph_file,
                       read_csv, write_csv, write_graph_file)
from qgspec.potential import Potential
from qgspec.random_graphs import random_graph
from qgspec.solver import solve_spectrum

MINIMAL = {"vertices": [{"id": 0, "alpha": 0}, {"id": 1, "alpha": 0}],
           "edges": [{"tail": 0, "head": 1, "length": 1.0}]}


def test_minimal_interval(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps(MINIMAL))
    G, q = parse_graph_file(p)
    assert G.n_vertices == 2 and G.n_edges == 1 and q.is_zero


def test_inf_alpha_is_dirichlet():
    doc = json.loads(json.dumps(MINIMAL))
    doc["vertices"][1]["alpha"] = "inf"
    G, _ = graph_from_dict(doc)
    assert G.is_dirichlet(1) and not G.is_dirichlet(0)


def test_string_ids_and_default_alpha():
    doc = {"vertices": [{"id": "a"}, {"id": "b", "alpha": 2.5}],
           "edges": [{"tail": "b", "head": "a", "length": 0.5}]}
    G, _ = graph_from_dict(doc)
    assert G.couplings == (0.0, 2.5) and (G.edges[0].tail, G.edges[0].head) == (1, 0)


@pytest.mark.parametrize("mutate, path", [
    (lambda d: d["edges"][0].pop("length"), "edges[0].length"),
    (lambda d: d["edges"][0].update(length=-2), "edges[0].length"),
    (lambda d: d["edges"][0].update(length="long"), "edges[0].length"),
    (lambda d: d["edges"][0].update(head=7), "edges[0].head"),
    (lambda d: d["vertices"][1].update(alpha="big"), "vertices[1].alpha"),
    (lambda d: d["vertices"][1].update(id=0), "vertices[1].id"),
    (lambda d: d.pop("edges"), "$.edges"),
    (lambda d: d.update(potential={"kind": "wavy", "per_edge": [1]}), "potential.kind"),
    (lambda d: d.update(potential={"kind": "constant", "per_edge": [1, 2]}), "potential.per_edge"),
    (lambda d: d.update(potential={"kind": "samples", "per_edge": [[1.0]]}), "potential.per_edge"),
    (lambda d: d.update(potential={"kind": "poly", "per_edge": [[1, "x"]]}),
     "potential.per_edge[0][1]"),
])
def test_errors_name_field(mutate, path):
    doc = json.loads(json.dumps(MINIMAL))
    mutate(doc)
    with pytest.raises(GraphFileError) as exc:
        graph_from_dict(doc)
    assert exc.value.path == path
    assert str(exc.value).startswith(path)


def test_missing_length_names_edge_index():
    doc = {"vertices": [{"id": 0}, {"id": 1}],
           "edges": [{"tail": 0, "head": 1, "length": 1}, {"tail": 1, "head": 0}]}
    with pytest.raises(GraphFileError, match=r"edges\[1\]\.length"):
        graph_from_dict(doc)


def test_json_syntax_error_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "vertices": [\n  oops\n}')
    with pytest.raises(GraphFileError, match="line 3"):
        parse_graph_file(p)


def test_potential_kinds():
    for kind, per_edge in (("constant", [2.0]), ("poly", [[0.0, 1.0, 3.0]]),
                           ("samples", [[0.0, 1.0, 0.5]])):
        doc = dict(MINIMAL, potential={"kind": kind, "per_edge": per_edge})
        _, q = graph_from_dict(doc)
        assert q.kind == kind


def test_roundtrip_random(tmp_path, rng):
    for i in range(5):
        G = random_graph(rng, p_dirichlet=0.3)
        q = Potential.poly(G, [rng.normal(size=3) for _ in range(G.n_edges)])
        p = tmp_path / f"g{i}.json"
        write_graph_file(p, G, q)
        G2, q2 = parse_graph_file(p)
        assert G2 == G
        assert graph_invariants(G2) == graph_invariants(G)
        assert all(np.array_equal(a, b) for a, b in zip(q.data, q2.data))
        a = solve_spectrum(G, q, 3).eigenvalues
        b = solve_spectrum(G2, q2, 3).eigenvalues
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)
        assert graph_to_dict(G2, q2) == graph_to_dict(G, q)


def test_schema_accepts_shipped_files():
    jsonschema = pytest.importorskip("jsonschema")
    from pathlib import Path

    root = Path(__file__).resolve().parents[1]
    schema = json.loads((root / "docs" / "graph.schema.json").read_text())
    files = sorted((root / "data").glob("*.json"))
    assert files
    for f in files:
        jsonschema.validate(json.loads(f.read_text()), schema)
        parse_graph_file(f)


def test_fmt():
    assert fmt(math.pi) == "3.14159265359"
    assert fmt(1e-20) == "1e-20"
    assert fmt(math.inf) == "inf" and fmt(None) == "" and fmt(True) == "true"
    assert fmt(np.int64(3)) == "3" and fmt("x") == "x"


def test_csv_roundtrip(tmp_path):
    p = tmp_path / "o.csv"
    with open(p, "w") as fh:
        write_csv(fh, ["a", "b"], [(1, 0.5), ("x,y", None)], comment="seed=1")
    assert p.read_text().splitlines()[0] == "# seed=1"
    header, rows = read_csv(p)
    assert header == ["a", "b"] and rows == [["1", "0.5"], ["x,y", ""]]
