import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normalis import ParseError, PointSet, Space, Tolerance, double_normal_graph
from normalis import constructions as C
from normalis.io import dumps_pointset, graph_json, loads_pointset, read_pointset, to_off, to_svg, write_pointset


def test_round_trip_exact(tmp_path):
    V = C.layered_construction(C.LayeredParams(6, 2))
    path = tmp_path / "v.json"
    write_pointset(V, path, {"kind": "layered"})
    W, meta = read_pointset(path)
    assert W.space is Space.SPHERE
    assert np.array_equal(W.points, V.points)
    assert meta == {"kind": "layered"}


def test_dump_is_deterministic(octagon):
    assert dumps_pointset(octagon) == dumps_pointset(C.regular_polygon(8))
    text = dumps_pointset(octagon)
    assert text.count("\n") == 8 + 5
    assert "tolerance" not in text


def test_tolerance_round_trip():
    V = PointSet.from_array([[0.0, 0.0], [1.0, 0.0]], tol=Tolerance(boundary_eps=1e-7))
    W, _ = loads_pointset(dumps_pointset(V))
    assert W.tol.boundary_eps == 1e-7


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6)), min_size=2, max_size=8, unique=True))
def test_round_trip_property(pts):
    X = np.array(pts)
    try:
        V = PointSet.from_array(X)
    except ValueError:
        return
    W, _ = loads_pointset(dumps_pointset(V))
    assert np.array_equal(W.points, V.points)


@pytest.mark.parametrize(
    "text, line, col",
    [
        ('{"space": "plane",\n "points": [[0, 0], [1, 2,]]}', 2, 27),
        ('{"space": "plane",\n "points": [\n  [0, 0],\n  [1, "x"]\n]}', 4, 3),
        ('{"space": "sphere",\n "points": [\n  [1, 0, 0],\n  [0, 1]\n]}', 4, 3),
        ('{"space": "torus", "points": []}', 1, 2),
        ('[1, 2]', 1, 1),
    ],
)
def test_parse_errors_carry_location(text, line, col):
    with pytest.raises(ParseError) as info:
        loads_pointset(text)
    assert (info.value.line, info.value.col) == (line, col)
    assert f"line {line}, column {col}" in str(info.value)


def test_parse_error_for_bad_points():
    with pytest.raises(ParseError, match="coincide"):
        loads_pointset('{"space": "plane", "points": [[0, 0], [0, 0]]}')
    with pytest.raises(ParseError, match="missing"):
        loads_pointset('{"space": "plane"}')
    with pytest.raises(ParseError, match="tolerance"):
        loads_pointset('{"space": "plane", "points": [[0, 0], [1, 0]], "tolerance": {"bogus": 1}}')


def test_graph_json(octagon):
    G = double_normal_graph(octagon)
    doc = json.loads(graph_json(octagon, G, "dn", {"note": 1}))
    assert doc["n_edges"] == 12 and len(doc["edges"]) == 12
    assert doc["space"] == "plane" and doc["note"] == 1


def test_off(cube):
    from normalis import delaunay_tiling

    text = to_off(cube, delaunay_tiling(cube).faces, comment="cube")
    lines = text.splitlines()
    assert lines[0] == "OFF" and lines[1] == "# cube"
    assert lines[2] == "8 6 12"
    assert all(line.startswith("4 ") for line in lines[-6:])


def test_svg_colours(octagon):
    from normalis import red_blue_decomposition

    G = double_normal_graph(octagon)
    rep = red_blue_decomposition(octagon, G)
    svg = to_svg(octagon, G.with_edges(G.edges, colors=rep.colors))
    assert svg.count("stroke-dasharray") == 8
    assert svg.count('class="edge blue"') == 4
    assert svg.count('class="vertex"') == 8
