import dataclasses

import pytest
from hypothesis import given, strategies as st

from solgroup import gallery
from solgroup.graphs import incidence_system, indicator
from solgroup.pauli import (MonomialOperator, OperatorAssignment, OperatorError, commutator, default_q,
                            identity, identity_assignment, inverse, is_scalar, lift, mermin_peres_assignment,
                            mermin_peres_square, multiply, power, scalar, tensor, verify_operator_solution,
                            weyl_generators)
from solgroup.picture import LinearSystem


def dense(A):
    """Monomial operator as a dense matrix of phase exponents (None = 0 entry)."""
    M = [[None] * A.dim for _ in range(A.dim)]
    for i, j in enumerate(A.perm):
        M[j][i] = A.phase[i]
    return M


def dense_mul(A, B, q):
    n = len(A)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if A[i][k] is not None and B[k][j] is not None:
                    out[i][j] = (A[i][k] + B[k][j]) % q
    return out


def ops(d, q):
    return st.builds(lambda perm, ph: MonomialOperator(tuple(perm), tuple(ph), q),
                     st.permutations(list(range(d))), st.lists(st.integers(0, q - 1), min_size=d, max_size=d))


@given(ops(4, 6), ops(4, 6))
def test_multiply_matches_dense_product(A, B):
    assert dense(multiply(A, B)) == dense_mul(dense(A), dense(B), 6)


@given(ops(3, 5), ops(3, 5), ops(3, 5))
def test_group_laws(A, B, C):
    I = identity(3, 5)
    assert multiply(multiply(A, B), C) == multiply(A, multiply(B, C))
    assert multiply(A, I) == A == multiply(I, A)
    assert multiply(A, inverse(A)) == I
    assert power(A, -2) == inverse(multiply(A, A))


@pytest.mark.parametrize("d,q", [(2, 2), (2, 4), (3, 3), (4, 8), (5, 5)])
def test_weyl_relations(d, q):
    X, Z = weyl_generators(d, q)
    I = identity(d, q)
    assert power(X, d) == I and power(Z, d) == I
    # Z X = w_d X Z
    assert multiply(Z, X) == multiply(scalar(d, q, q // d), multiply(X, Z))
    assert is_scalar(commutator(Z, X)) == q // d


def test_weyl_needs_d_dividing_q():
    with pytest.raises(OperatorError):
        weyl_generators(3, 4)


def test_tensor_dimensions_and_phase_modulus():
    X2, _ = weyl_generators(2, 2)
    X3, _ = weyl_generators(3, 3)
    T = tensor(X2, X3)
    assert T.dim == 6 and T.q == 6
    assert power(T, 6) == identity(6, 6)
    assert lift(X2, 4).phase == (0, 0)


def test_operator_validation():
    with pytest.raises(OperatorError):
        MonomialOperator((0, 0), (0, 0), 2)
    with pytest.raises(OperatorError):
        MonomialOperator((0, 1), (0,), 2)


@pytest.mark.parametrize("p,q", [(2, 4), (3, 3), (5, 5), (6, 12)])
def test_default_q(p, q):
    assert default_q(p) == q


def test_mermin_peres_square_products():
    sq = mermin_peres_square()
    I = identity(4, 4)
    for row in sq:
        assert multiply(multiply(row[0], row[1]), row[2]) == I
    cols = [multiply(multiply(sq[0][c], sq[1][c]), sq[2][c]) for c in range(3)]
    assert [is_scalar(c) for c in cols] == [0, 0, 2]
    for X in (x for row in sq for x in row):
        assert power(X, 2) == I


def k33_system(p=2):
    G = gallery.k33()
    return incidence_system(G, indicator(G), p)


def test_mermin_peres_assignment_verifies():
    rep = verify_operator_solution(mermin_peres_assignment(k33_system()))
    assert rep.passed and len(rep.fingerprint) == 64


def test_mermin_peres_assignment_with_wrong_colour_fails():
    G = gallery.k33()
    S = incidence_system(G, indicator(G, "a"), 2)
    rep = verify_operator_solution(mermin_peres_assignment(S))
    assert not rep.passed and {f.condition for f in rep.failures} == {2}


def test_assignment_json_round_trip():
    a = mermin_peres_assignment(k33_system())
    b = OperatorAssignment.from_json(a.to_json())
    assert b.system == a.system and b.ops == a.ops
    assert verify_operator_solution(b).fingerprint == verify_operator_solution(a).fingerprint
    with pytest.raises(OperatorError):
        OperatorAssignment.from_json(a.to_json(with_system=False))
    assert OperatorAssignment.from_json(a.to_json(with_system=False), a.system).ops == a.ops


def test_failures_are_classified():
    S = LinearSystem([[1, 1]], [1], 2)
    X, Z = weyl_generators(2, 4)
    # X and Z anticommute: condition 3 fails, and the product is not scalar either
    rep = verify_operator_solution(OperatorAssignment(S, {0: X, 1: Z}, 4))
    assert {f.condition for f in rep.failures} == {2, 3}
    W, _ = weyl_generators(4, 4)
    rep = verify_operator_solution(OperatorAssignment(S, {0: W, 1: W}, 4))
    assert 1 in {f.condition for f in rep.failures}


def test_classical_system_has_scalar_solution():
    # x + y = J over Z_3 has the 1-dimensional solution x = w, y = 1
    S = LinearSystem([[1, 1]], [1], 3)
    a = OperatorAssignment(S, {0: scalar(1, 3, 1), 1: identity(1, 3)}, 3)
    assert verify_operator_solution(a).passed
    assert not verify_operator_solution(identity_assignment(S)).passed


def test_structural_failures():
    S = LinearSystem([[1, 1]], [0], "inf")
    rep = verify_operator_solution(OperatorAssignment(S, {0: identity(1, 2), 1: identity(1, 2)}, 2))
    assert rep.failures[0].condition == 0
    S3 = LinearSystem([[1, 1]], [0], 3)
    rep = verify_operator_solution(OperatorAssignment(S3, {0: identity(1, 4)}, 4))
    assert rep.failures[0].condition == 0
