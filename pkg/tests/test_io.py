import json

import pydot
import pytest
from hypothesis import given, strategies as st

from solgroup import export, gallery, jsonio
from solgroup.graphs import Graph
from solgroup.pauli import mermin_peres_assignment
from solgroup.picture import LinearSystem, Picture

json_values = st.recursive(
    st.none() | st.booleans() | st.integers() | st.text(max_size=5),
    lambda inner: st.lists(inner, max_size=3) | st.dictionaries(st.text(max_size=4), inner, max_size=3),
    max_leaves=10,
)


@given(json_values)
def test_canonical_round_trip(obj):
    assert json.loads(jsonio.canonical(obj)) == obj
    assert jsonio.canonical(json.loads(jsonio.dumps(obj))) == jsonio.canonical(obj)


def test_dumps_is_canonical():
    assert jsonio.dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_load_errors(tmp_path):
    with pytest.raises(jsonio.InputError, match="no such file"):
        jsonio.load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    with pytest.raises(jsonio.InputError, match="malformed"):
        jsonio.load(bad)


def test_write_then_load(tmp_path):
    P = gallery.gallery("K33").picture(None, 3)
    path = tmp_path / "p.json"
    jsonio.write(path, P.to_json())
    assert Picture.from_json(jsonio.load(path)).fingerprint() == P.fingerprint()


@pytest.mark.parametrize("doc,kind", [
    (gallery.gallery("K33").picture(None, 2).to_json(), "picture"),
    (LinearSystem([[1]], [0], 2).to_json(), "system"),
    (gallery.k5().to_json(), "graph"),
    ({"vertices": [0], "edges": [0], "incidence": [[0, 0]]}, "hypergraph"),
    ({"H": "h.json", "G": "g.json", "phi": {}}, "cover"),
    ({"rotation": {}, "pairing": []}, "map"),
])
def test_kind_of(doc, kind):
    assert jsonio.kind_of(doc) == kind


def test_kind_of_assignment():
    from solgroup.graphs import incidence_system, indicator
    G = gallery.k33()
    a = mermin_peres_assignment(incidence_system(G, indicator(G), 2))
    assert jsonio.kind_of(a.to_json()) == "assignment"


@pytest.mark.parametrize("doc", [[], {"x": 1}])
def test_kind_of_rejects(doc):
    with pytest.raises(jsonio.InputError):
        jsonio.kind_of(doc)


@pytest.mark.parametrize("name", ["K33", "D17"])
def test_picture_dot_parses(name):
    P = gallery.gallery(name).picture(None, 5)
    (g,) = pydot.graph_from_dot_data(export.picture_to_dot(P))
    assert len(g.get_nodes()) - len([n for n in g.get_nodes() if n.get_name() in ("node", "edge")]) == len(P.vertices)
    assert len(g.get_edges()) == len(P.edges)


@pytest.mark.parametrize("name", gallery.NAMES)
def test_graph_dot_parses(name):
    G = gallery.gallery(name).graph
    (g,) = pydot.graph_from_dot_data(export.graph_to_dot(G))
    assert len(g.get_edges()) == len(G.ends)


def test_dot_escapes_quotes():
    G = Graph.from_edges([('a"b', "c\\d")])
    (g,) = pydot.graph_from_dot_data(export.graph_to_dot(G))
    assert len(g.get_edges()) == 1


def test_tikz_output():
    P = gallery.gallery("K33").picture(None, 2)
    t = export.picture_to_tikz(P)
    assert t.startswith("\\begin{tikzpicture}") and t.rstrip().endswith("\\end{tikzpicture}")
    assert t.count("\\node") == len(P.vertices)
    assert t.count("\\draw") == len(P.edges)
    assert export.tex_escape("a_b#c") == "a\\_b\\#c"
    g = export.graph_to_tikz(gallery.k5())
    assert g.count("\\draw") == 10
