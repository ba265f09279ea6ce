import random

import pytest
from hypothesis import given, strategies as st

from solgroup import gallery
from solgroup.generators import random_valid_picture, rng_from
from solgroup.graphs import incidence_matrix, incidence_system, indicator
from solgroup.order import (AT_LEAST, DIVIDES, EXACT, Family, FactKind, Mode, OrderError, SystemRef,
                            abelian_order, b_scale_facts, check_against_abelianization, crt_combine, deduce,
                            entries_are_units, exact_from_theorem, hom_conditions, hom_pullback, hom_transfer,
                            ref_of, upper_from_picture)
from solgroup.picture import certify
from solgroup.zmod import Modulus

# synthetic_facts: the test invents its premises, so they stay out of the oracle sweep
K33 = gallery.k33()
K33_A = tuple(map(tuple, incidence_matrix(K33)))
FAM = Family(K33_A, "K33")


def ref(p, b=None):
    if b is None:
        b = tuple(indicator(K33).values())
    return SystemRef(FAM, tuple(b), Modulus.of(p))


@pytest.mark.synthetic_facts
def test_divides_is_normalised_by_p():
    assert DIVIDES(ref(6), 4).n == 2
    assert DIVIDES(ref(6), 0).n == 6
    assert DIVIDES(ref("inf"), 4).n == 4


@pytest.mark.synthetic_facts
@pytest.mark.parametrize("kind", [AT_LEAST, EXACT])
def test_lower_bounds_must_divide_p(kind):
    with pytest.raises(OrderError):
        kind(ref(6), 4)
    assert kind(ref(6), 3).n == 3


@pytest.mark.parametrize("p,q,alpha,beta,lam,delta,ok", [
    (6, 2, 1, 1, 1, 1, True),
    (2, 6, 1, 1, 3, 3, True),
    (2, 6, 1, 1, 1, 1, False),       # 6 does not divide 2
    (3, 3, 1, 2, 1, 1, False),      # 1*1 != 2*1 mod 3
    (3, 3, 2, 1, 1, 2, True),
    ("inf", 5, 1, 1, 1, 1, True),
    (5, "inf", 1, 1, 1, 1, False),
    (5, "inf", 1, 1, 0, 0, True),
])
def test_hom_conditions(p, q, alpha, beta, lam, delta, ok):
    assert hom_conditions(p, q, alpha, beta, lam, delta) is ok


@pytest.mark.synthetic_facts
def test_hom_transfer_and_pullback():
    f = DIVIDES(ref(2), 1, "x")
    g = hom_transfer(2, 6, 1, 1, 3, 3, f)
    assert g.kind is FactKind.DIVIDES and g.n == 3 and g.ref == ref(6)
    h = hom_pullback(6, 2, 1, 1, 1, 1, EXACT(ref(2), 2))
    assert h.kind is FactKind.AT_LEAST and h.n == 2 and h.ref == ref(6)
    with pytest.raises(OrderError):
        hom_transfer(2, 6, 1, 1, 1, 1, f)


@pytest.mark.synthetic_facts
def test_crt_combine():
    f = crt_combine(2, 3, EXACT(ref(2), 2), DIVIDES(ref(3), 1))
    assert f.kind is FactKind.EXACT and f.n == 2 and f.ref == ref(6)
    with pytest.raises(OrderError):
        crt_combine(2, 4, EXACT(ref(2), 2), EXACT(ref(4), 4))
    with pytest.raises(OrderError):
        crt_combine(2, 3, EXACT(ref(2), 2), DIVIDES(ref(3), 3))
    with pytest.raises(OrderError):
        crt_combine(2, 3, AT_LEAST(ref(2), 2), EXACT(ref(3), 1))


@pytest.mark.synthetic_facts
def test_b_scale_modes():
    f = EXACT(ref(2), 2, "ops")
    g = b_scale_facts(Mode.MULTIPLE_LIFT, 2, 2, f)
    assert g.kind is FactKind.EXACT and g.n == 4
    assert g.ref == ref(4, [2 * x for x in ref(2).b])
    h = b_scale_facts("UNIT_SCALE", 5, 2, f)
    assert h.ref.b == tuple(5 * x for x in f.ref.b) and h.n == 2
    z = b_scale_facts("ZERO_B", 0, 7, family=FAM)
    assert z.ref.b == (0,) * 6 and z.n == 7
    with pytest.raises(OrderError):
        b_scale_facts("UNIT_SCALE", 2, 4, EXACT(ref(4), 4))
    with pytest.raises(OrderError):
        b_scale_facts("MULTIPLE_LIFT", 2, 2, DIVIDES(ref(2), 1))


def test_theorem_facts():
    H = gallery.heawood()
    A = incidence_matrix(H)
    f = exact_from_theorem(A, 5, "H")
    assert f.ref.b is None and f.kind is FactKind.EXACT and f.n == 5
    assert exact_from_theorem(A, "inf").n == 0
    with pytest.raises(OrderError):
        exact_from_theorem(K33_A, 5)


def test_theorem_needs_unit_entries():
    # doubling every entry: row one then reads prod x^2 = J, and x^2 = 1 at p = 2
    A = [[2 * x for x in row] for row in incidence_matrix(gallery.heawood())]
    assert not entries_are_units(A, 2)
    assert entries_are_units(A, 3)
    with pytest.raises(OrderError):
        exact_from_theorem(A, 2)
    b = [1] + [0] * 13
    assert abelian_order(A, b, 2) == 1
    assert exact_from_theorem(A, 3).n == 3


@pytest.mark.parametrize("b,p,want", [
    ([1, 0, 0, 0, 0, 0], 2, 1),
    ([1, 0, 0, 0, 0, 0], "inf", 1),
    ([0] * 6, "inf", 0),
    ([0] * 6, 5, 5),
    ([2, 0, 0, 0, 0, 0], 4, 2),
    ([3, 0, 0, 0, 0, 0], "inf", 3),
])
def test_abelian_order_k33(b, p, want):
    assert abelian_order(K33_A, b, p) == want


def test_abelian_order_hand_example():
    # single equation 2x = J over Z_4: abelianisation <x, J | 2x = J, 4x, 4J>, J has order 2
    assert abelian_order([[2]], [1], 4) == 2
    assert abelian_order([[2]], [1], 3) == 3
    assert abelian_order([], [], 5, ncols=2) == 5


def test_deduce_mermin_peres_arithmetic():
    facts = [EXACT(ref(2), 2, "ops"), DIVIDES(ref(3), 1, "pic")]
    cl = deduce(facts, [ref(6)])
    assert cl.consistent
    assert cl.exact(ref(6)) == 2


@pytest.mark.synthetic_facts
def test_deduce_reports_inconsistency():
    cl = deduce([EXACT(ref(4), 4), DIVIDES(ref(4), 2)])
    assert not cl.consistent
    bad = cl.inconsistencies[0]
    assert bad.ref == ref(4) and bad.lower == 4 and bad.upper == 2


def test_deduce_generic_and_zero_b():
    A = incidence_matrix(gallery.heawood())
    f = exact_from_theorem(A, 3, "H")
    r = SystemRef(f.ref.family, tuple([1] + [0] * 13), Modulus(3))
    cl = deduce([f], [r, SystemRef(f.ref.family, (0,) * 14, Modulus(9))])
    assert cl.exact(r) == 3
    assert cl.exact(SystemRef(f.ref.family, (0,) * 14, Modulus(9))) == 9


@pytest.mark.synthetic_facts
def test_deduce_equal_colour_sum_copies_facts():
    cl = deduce([EXACT(ref(2), 2)], [ref(2, [0, 1, 0, 0, 0, 0]), ref(2, [1, 1, 1, 0, 0, 0])])
    assert cl.exact(ref(2, [0, 1, 0, 0, 0, 0])) == 2
    assert cl.exact(ref(2, [1, 1, 1, 0, 0, 0])) == 2


@pytest.mark.synthetic_facts
def test_equal_order_rule_is_not_applied_over_z():
    # over Z, |b| = 1 and |b| = 3 are not unit multiples; the abelianisation tells them apart
    src, dst = ref("inf"), ref("inf", [3, 0, 0, 0, 0, 0])
    assert abelian_order(K33_A, dst.b, "inf") == 3
    cl = deduce([DIVIDES(src, 2)], [dst])
    assert cl.about(dst).n != 2


@pytest.mark.synthetic_facts
def test_equal_order_rule_mod_p():
    # 1 and 2 both have order 3 in Z_3, and 2 = 2 * 1 with 2 a unit
    cl = deduce([DIVIDES(ref(3), 1)], [ref(3, [1, 1, 0, 0, 0, 0])])
    assert cl.exact(ref(3, [1, 1, 0, 0, 0, 0])) == 1


fact_st = st.builds(
    lambda kind, p, n, b: kind(ref(p, b), n if kind is DIVIDES else (n if p % n == 0 else 1)),
    st.sampled_from([DIVIDES, AT_LEAST, EXACT]),
    st.sampled_from([2, 3, 4, 6, 12]),
    st.sampled_from([1, 2, 3, 4, 6, 12]),
    st.sampled_from([(1, 0, 0, 0, 0, 0), (1, 1, 0, 0, 0, 0), (0, 0, 0, 2, 0, 0)]),
)


@pytest.mark.synthetic_facts
@given(st.lists(fact_st, max_size=5))
def test_deduce_is_idempotent(facts):
    cl = deduce(facts)
    again = deduce(cl.facts())
    assert {(f.ref, f.kind, f.n) for f in again.facts()} == {(f.ref, f.kind, f.n) for f in cl.facts()}


@pytest.mark.synthetic_facts
@given(st.lists(fact_st, max_size=4), st.lists(fact_st, max_size=3))
def test_deduce_is_monotone(base, more):
    small, big = deduce(base), deduce(base + more)
    for r, s in small.states.items():
        t = big.states[r]
        assert s.div % t.div == 0 if t.div else s.div == 0
        assert t.atl % s.atl == 0 if s.atl else t.atl == 0


@pytest.mark.parametrize("p", [2, 3, 5, 6, "inf"])
@given(seed=st.integers(0, 10_000))
def test_picture_facts_respect_abelianisation(p, seed):
    P = random_valid_picture(rng_from(seed), p)
    f = upper_from_picture(certify(P))
    assert check_against_abelianization(f)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_theorem_facts_respect_abelianisation(p):
    for name in ("HEAWOOD", "K44"):
        G = gallery.gallery(name).graph
        rng = random.Random(name)
        samples = [[rng.randint(-3, 3) for _ in G.vertices] for _ in range(5)]
        f = exact_from_theorem(incidence_matrix(G), p, name)
        assert check_against_abelianization(f, samples)


def test_ref_of_uses_system():
    S = incidence_system(K33, indicator(K33), 6)
    assert ref_of(S, "K33") == ref(6)
    assert FAM.connected_incidence
