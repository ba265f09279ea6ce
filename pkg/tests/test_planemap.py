import networkx as nx
import pytest
from hypothesis import given, strategies as st

from solgroup.generators import (cube_map, grid_map, octahedron_map, random_plane_map, random_planar_sample,
                                 rng_from, triangulated_grid)
from solgroup.planemap import (SC_PAIRS, CombinatorialMap, MapError, NotPlanarError, boundary_simple_cycle,
                               check_planar_embedding, euler_characteristics, face_size, from_neighbor_rotation,
                               is_simple_cycle, sc_witness, trace_faces)
from solgroup.gallery import K4_ROTATION


def as_nx(M):
    G = nx.MultiGraph()
    G.add_nodes_from(M.rotation)
    for e in M.edges:
        G.add_edge(*M.ends(e))
    return G


@pytest.mark.parametrize("build,V,E,F", [
    (lambda: grid_map(3, 4), 12, 17, 7),
    (cube_map, 8, 12, 6),
    (octahedron_map, 6, 12, 8),
    (lambda: from_neighbor_rotation(K4_ROTATION)[0], 4, 6, 4),
])
def test_known_maps(build, V, E, F):
    M = build()
    assert euler_characteristics(M) == [(V, E, F)]
    assert check_planar_embedding(M)


def test_face_sizes_of_cube_and_octahedron():
    assert sorted(len(f) for f in trace_faces(cube_map()).faces) == [4] * 6
    assert sorted(len(f) for f in trace_faces(octahedron_map()).faces) == [3] * 8


def test_non_planar_rotation_detected():
    # K4 with one rotation reversed is a torus embedding
    rot = dict(K4_ROTATION)
    rot["4"] = list(reversed(rot["4"]))
    M, _ = from_neighbor_rotation(rot)
    assert not check_planar_embedding(M)
    with pytest.raises(NotPlanarError):
        sc_witness(M, (4, 4))


def test_map_validation():
    with pytest.raises(MapError):
        CombinatorialMap({0: (0, 1)}, {0: 1, 1: 1})
    with pytest.raises(MapError):
        CombinatorialMap({0: (0,), 1: (0,)}, {0: 1})
    with pytest.raises(MapError):
        from_neighbor_rotation({"a": ["b"], "b": []})


def test_face_size_counts_bridges_twice():
    M, _ = from_neighbor_rotation({"a": ["b"], "b": ["a"]})
    (f,) = trace_faces(M).faces
    assert face_size(M, f) == 2
    assert boundary_simple_cycle(M, f) is None


@given(st.integers(0, 10_000))
def test_random_maps_are_plane(seed):
    M = random_plane_map(rng_from(seed))
    assert check_planar_embedding(M)
    assert nx.check_planarity(nx.Graph(as_nx(M)))[0]


@given(st.integers(0, 10_000))
def test_boundary_cycles_are_simple(seed):
    M = random_plane_map(rng_from(seed), simple=True)
    for f in trace_faces(M).faces:
        c = boundary_simple_cycle(M, f)
        if c is not None:
            assert is_simple_cycle(M, c)


@pytest.mark.parametrize("pair", SC_PAIRS)
@given(seed=st.integers(0, 10_000))
def test_sc_witness_is_genuine(pair, seed):
    M = random_planar_sample(rng_from(seed))
    w = sc_witness(M, pair)
    a, b = pair
    if w.kind == "vertex":
        assert M.degree(w.item) == w.value < a
    else:
        assert w.item in trace_faces(M).faces and len(w.item) == w.value < b


@pytest.mark.parametrize("pair,kind", [((6, 3), "vertex"), ((4, 4), "vertex"), ((3, 6), "face")])
def test_sc_witness_on_triangulated_grid(pair, kind):
    w = sc_witness(triangulated_grid(4, 4), pair)
    assert w.kind in ("vertex", "face")


def test_sc_witness_rejects_other_pairs():
    with pytest.raises(ValueError):
        sc_witness(cube_map(), (5, 5))
