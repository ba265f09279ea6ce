import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from solgroup import gallery
from solgroup.generators import (qualifying_systems, random_cancellation_picture, random_system,
                                 random_valid_picture, rng_from, with_random_entries)
from solgroup.picture import (InvalidPicture, Kind, LinearSystem, MoveNotApplicable, Outcome, Picture, Violation,
                              apply_move, certify, empty_picture, find_violation, flip_orientation, iter_violations,
                              phase, reduce, verify)
from solgroup.zmod import Modulus

PS = [2, 3, 4, 5, 6, "inf"]


def k33_picture(p, b=None):
    return gallery.gallery("K33").picture(b, p)


def test_linear_system_shapes():
    S = LinearSystem([[1, 0, 2], [0, 1, 1]], [1, 0], 3)
    assert (S.m, S.n) == (2, 3)
    assert S.support(0) == (0, 2)
    assert S.local_relation(0) == (1, 2, -1)
    assert LinearSystem.from_json(S.to_json()) == S
    with pytest.raises(ValueError):
        LinearSystem([[1, 0]], [1, 2], 3)


@pytest.mark.parametrize("name", ["K33", "D17"])
@pytest.mark.parametrize("p", PS)
def test_shipped_pictures_verify(name, p):
    P = gallery.gallery(name).picture(None, p)
    assert verify(P) == []
    assert phase(P) == Modulus.of(p).reduce(2)
    c = certify(P)
    assert c.phase == phase(P) and len(c.picture_hash) == 64


def test_shipped_picture_sizes():
    K = k33_picture("inf")
    D = gallery.gallery("D17").picture(None, "inf")
    assert (len(K.vertices), len(K.edges)) == (12, 18)
    assert (len(D.vertices), len(D.edges)) == (24, 48)


def test_wrong_k_is_a_vertex_equation_violation():
    P = k33_picture(5)
    v = P.vertices[0]
    Q = dataclasses.replace(P, k={**P.k, v: P.k[v] + 1})
    bad = verify(Q)
    assert [x.kind for x in bad] == [Kind.VERTEX_EQUATION]
    assert bad[0].witness == (v,)
    with pytest.raises(InvalidPicture):
        certify(Q)


def test_wrong_edge_label_is_an_incidence_violation():
    P = k33_picture(3)
    e = P.edges[0]
    i = P.hV[P.source(e)]
    other = next(j for j in range(P.system.n) if j not in P.system.support(i))
    Q = dataclasses.replace(P, hE={**P.hE, e: other})
    assert Kind.INCIDENCE in {x.kind for x in verify(Q)}


def test_json_round_trip_keeps_fingerprint():
    P = gallery.gallery("D17").picture(None, 6)
    Q = Picture.from_json(P.to_json())
    assert Q.fingerprint() == P.fingerprint()
    assert verify(Q) == []


@pytest.mark.parametrize("p", [3, 4, "inf"])
@given(seed=st.integers(0, 10_000))
def test_flip_orientation_keeps_validity(p, seed):
    rng = rng_from(seed)
    P = random_valid_picture(rng, p)
    S = rng.sample(P.edges, rng.randint(0, len(P.edges)))
    Q = flip_orientation(P, S)
    assert verify(Q) == [] and phase(Q) == phase(P)


@pytest.mark.parametrize("p", [2, 3, 4, 6, "inf"])
@given(seed=st.integers(0, 10_000))
def test_cancellation_pictures_have_phase_zero(p, seed):
    rng = rng_from(seed)
    S = random_system(rng, rng.randint(1, 3), rng.randint(1, 4), p)
    P = random_cancellation_picture(rng, S)
    assert verify(P) == [] and phase(P) == 0


@pytest.mark.parametrize("p", [2, 3, 5, "inf"])
@given(seed=st.integers(0, 10_000))
def test_reduce_preserves_validity_and_phase(p, seed):
    P = random_valid_picture(rng_from(seed), p)
    T = reduce(P, check=True)
    sizes = [P.size] + [s.size_after for s in T.steps]
    assert all(x > y for x, y in zip(sizes, sizes[1:]))
    if T.outcome is Outcome.EMPTY:
        assert phase(P) == 0
    else:
        assert verify(T.final) == [] and phase(T.final) == phase(P)
        assert T.blocked or find_violation(T.final) is None


@pytest.mark.parametrize("p", [2, 3, 5, "inf"])
@given(seed=st.integers(0, 10_000))
def test_qualifying_phase_zero_pictures_reduce_to_empty(p, seed):
    rng = rng_from(seed)
    name, S = qualifying_systems(p)[seed % 2]
    S = with_random_entries(rng, S, units=True)
    P = random_cancellation_picture(rng, S)
    assert reduce(P, check=True).outcome is Outcome.EMPTY


@pytest.mark.parametrize("name", ["K33", "D17"])
@pytest.mark.parametrize("p", PS)
def test_shipped_pictures_are_already_reduced(name, p):
    P = gallery.gallery(name).picture(None, p)
    assert find_violation(P) is None
    T = reduce(P)
    assert T.outcome is Outcome.STUCK and T.steps == []


def test_empty_picture():
    S = LinearSystem([[1, 1]], [1], 4)
    E = empty_picture(S)
    assert verify(E) == [] and phase(E) == 0
    assert reduce(E).outcome is Outcome.EMPTY


def test_iter_violations_order():
    rng = random.Random(7)
    S = random_system(rng, 2, 3, 5)
    P = random_cancellation_picture(rng, S, dipoles=3, subdivisions=2, merges=2, flips=1)
    order = [Kind.LOOP, Kind.ZERO_EDGE, Kind.SAME_LABEL_FACE_PAIR, Kind.LOW_DEGREE, Kind.MONO_CYCLE]
    kinds = [v.kind for v in iter_violations(P)]
    assert kinds == sorted(kinds, key=order.index)


def test_moves_check_their_preconditions():
    P = k33_picture(3)
    e = P.edges[0]
    with pytest.raises(MoveNotApplicable):
        apply_move(P, Violation(Kind.LOOP, (e,)))
    with pytest.raises(MoveNotApplicable):
        apply_move(P, Violation(Kind.ZERO_EDGE, (e,)))
    v, w = P.vertices[:2]
    if P.hV[v] != P.hV[w]:
        with pytest.raises(MoveNotApplicable):
            apply_move(P, Violation(Kind.SAME_LABEL_FACE_PAIR, (v, w, ())))


def test_reduce_rejects_invalid_input():
    P = k33_picture(5)
    v = P.vertices[0]
    with pytest.raises(InvalidPicture):
        reduce(dataclasses.replace(P, k={**P.k, v: 3}))


@pytest.mark.parametrize("p", [3, 4, 5, "inf"])
@given(seed=st.integers(0, 10_000))
def test_random_colouring_phase_is_twice_colour_sum(p, seed):
    rng = rng_from(seed)
    G = gallery.k33()
    b = {v: rng.randint(-5, 5) for v in G.vertices}
    P = k33_picture(p, b)
    assert verify(P) == []
    assert phase(P) == Modulus.of(p).reduce(2 * sum(b.values()))
