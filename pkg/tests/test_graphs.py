import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from solgroup import gallery
from solgroup.generators import cover_instances, random_b, rng_from
from solgroup.graphs import (CoverMap, Graph, GraphError, SizeGuardExceeded, apply_shift,
                             bipartite_double_cover, cover_to_picture, has_minor, incidence_matrix,
                             incidence_solvable, incidence_system, indicator, normalize_colouring, verify_cover)
from solgroup.picture import phase, verify
from solgroup.zmod import INF, Modulus


def nx_of(G):
    H = nx.Graph()
    H.add_nodes_from(G.vertices)
    H.add_edges_from(G.ends.values())
    return H


def test_edge_naming_and_orientation():
    G = Graph.from_edges([("a", "b"), ("a", "b"), ("b", "c")])
    assert list(G.ends) == ["a-b", "a-b#2", "b-c"]
    assert G.source("b-c") == "b" and G.target("b-c") == "c"
    assert not G.is_simple()


def test_loops_rejected():
    with pytest.raises(GraphError):
        Graph.from_edges([("a", "a")])


def test_incidence_matrix_columns():
    G = gallery.k33()
    A = incidence_matrix(G)
    for j in range(len(G.ends)):
        col = sorted(A[i][j] for i in range(len(A)))
        assert col == [-1, 0, 0, 0, 0, 1]


def test_graph_json_round_trip():
    G = gallery.d17()
    H = Graph.from_json(G.to_json())
    assert H.vertices == G.vertices and H.ends == G.ends and H.src == G.src


@pytest.mark.parametrize("name", gallery.NAMES)
@pytest.mark.parametrize("p", [2, 3, 5, 7, "inf"])
def test_solvable_iff_colour_sum_vanishes(name, p):
    G = gallery.gallery(name).graph
    rng = random.Random(f"{name}{p}")
    P = Modulus.of(p)
    for _ in range(5):
        b = random_b(rng, G)
        ok, x = incidence_solvable(G, b, p)
        assert ok == P.is_zero(sum(b.values()))
        if ok:
            S = incidence_system(G, b, p)
            assert all(P.is_zero(sum(a * y for a, y in zip(row, x)) - c) for row, c in zip(S.A, S.b))


def test_components_checked_separately():
    G = Graph.from_edges([("a", "b"), ("c", "d")])
    assert not incidence_solvable(G, {"a": 1, "b": 0, "c": -1, "d": 0}, INF)[0]
    assert incidence_solvable(G, {"a": 1, "b": -1, "c": 2, "d": -2}, INF)[0]


@pytest.mark.parametrize("name", ["K33", "K5", "D17", "HEAWOOD"])
@given(seed=st.integers(0, 10_000))
def test_normalize_colouring(name, seed):
    G = gallery.gallery(name).graph
    b = random_b(rng_from(seed), G)
    v0 = G.vertices[0]
    nb, shifts = normalize_colouring(G, b, v0)
    assert nb[v0] == sum(b.values())
    assert all(nb[v] == 0 for v in G.vertices if v != v0)
    replay = dict(b)
    for e, lam in shifts:
        replay = apply_shift(G, replay, e, lam)
    assert replay == nb


def test_normalize_needs_connected():
    G = Graph.from_edges([("a", "b"), ("c", "d")])
    with pytest.raises(GraphError):
        normalize_colouring(G, indicator(G), "a")


def test_k4_double_cover_is_the_cube():
    H, phi = bipartite_double_cover(gallery.k4())
    cube = nx.hypercube_graph(3)
    assert nx.is_isomorphic(nx_of(H), cube)
    assert verify_cover(CoverMap(H, gallery.k4(), phi)) == 2


def test_k33_double_cover_arity():
    assert verify_cover(gallery.gallery("K33").cover()) == 2


def test_bad_cover_rejected():
    G = gallery.k4()
    H, phi = bipartite_double_cover(G)
    v = H.vertices[0]
    phi = dict(phi, **{v: next(w for w in G.vertices if w != phi[v])})
    assert verify_cover(CoverMap(H, G, phi)) is None


@pytest.mark.parametrize("name,c", cover_instances(), ids=lambda x: x if isinstance(x, str) else "")
@pytest.mark.parametrize("p", [2, 3, 6, "inf"])
def test_cover_pictures_verify(name, c, p):
    rng = random.Random(f"{name}{p}")
    b = random_b(rng, c.G)
    P = cover_to_picture(c, b, p)
    assert verify(P) == []
    k = verify_cover(c)
    assert phase(P) == Modulus.of(p).reduce(k * sum(b.values()))


def test_cover_needs_plane_embedding():
    c = gallery.gallery("K33").cover()
    with pytest.raises(GraphError):
        cover_to_picture(CoverMap(c.H, c.G, c.phi, None), indicator(c.G), 2)


@pytest.mark.parametrize("G,M,want", [
    (gallery.petersen(), gallery.k5(), True),
    (gallery.petersen(), gallery.k33(), True),
    (gallery.d17(), gallery.k33(), True),
    (gallery.k5(), gallery.k5(), True),
    (gallery.k4(), gallery.k5(), False),
    (gallery.cycle(6), gallery.k4(), False),
    (gallery.k33(), gallery.k5(), False),
])
def test_has_minor(G, M, want):
    assert has_minor(G, M) is want


def test_planar_cube_has_no_kuratowski_minor():
    H, _ = bipartite_double_cover(gallery.k4())
    assert nx.check_planarity(nx_of(H))[0]
    assert not has_minor(H, gallery.k5())
    assert not has_minor(H, gallery.k33())


def test_minor_size_guard():
    with pytest.raises(SizeGuardExceeded):
        has_minor(gallery.heawood(), gallery.k33())
