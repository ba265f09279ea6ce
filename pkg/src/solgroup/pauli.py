"""Exact monomial operators (generalised Pauli / clock-and-shift words).

An operator on C^D is stored as a permutation and a phase exponent per
basis vector: ``O|i> = w^phase[i] |perm[i]>`` with ``w = exp(2 pi i / q)``.
Products, inverses and scalar tests are exact integer computations.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from math import gcd
from typing import Mapping, Optional, Sequence

from .picture import LinearSystem


class OperatorError(ValueError):
    pass


@dataclass(frozen=True)
class MonomialOperator:
    perm: tuple
    phase: tuple
    q: int

    def __post_init__(self):
        perm = tuple(int(x) for x in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise OperatorError("perm is not a bijection of 0..D-1")
        if len(self.phase) != len(perm):
            raise OperatorError("phase and perm differ in length")
        if self.q < 1:
            raise OperatorError("q must be positive")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "phase", tuple(int(x) % self.q for x in self.phase))

    @property
    def dim(self) -> int:
        return len(self.perm)

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "phase": list(self.phase)}

    def __matmul__(self, other):
        return multiply(self, other)


def identity(dim: int, q: int) -> MonomialOperator:
    return MonomialOperator(tuple(range(dim)), (0,) * dim, q)


def scalar(dim: int, q: int, j: int) -> MonomialOperator:
    return MonomialOperator(tuple(range(dim)), (j,) * dim, q)


def weyl_generators(d: int, q: int) -> tuple[MonomialOperator, MonomialOperator]:
    """Shift X|i> = |i+1> and clock Z|i> = w_d^i |i>, with Z X = w_d X Z."""
    if d < 2 or q % d:
        raise OperatorError(f"need d >= 2 dividing q, got d={d}, q={q}")
    X = MonomialOperator(tuple((i + 1) % d for i in range(d)), (0,) * d, q)
    Z = MonomialOperator(tuple(range(d)), tuple((q // d) * i for i in range(d)), q)
    return X, Z


def multiply(A: MonomialOperator, B: MonomialOperator) -> MonomialOperator:
    """AB, acting as B first."""
    if A.dim != B.dim or A.q != B.q:
        raise OperatorError("operators differ in dimension or phase modulus")
    perm = tuple(A.perm[B.perm[i]] for i in range(B.dim))
    phase = tuple(B.phase[i] + A.phase[B.perm[i]] for i in range(B.dim))
    return MonomialOperator(perm, phase, A.q)


def lift(A: MonomialOperator, q: int) -> MonomialOperator:
    """Same operator written with phases modulo a multiple q of A.q."""
    if q % A.q:
        raise OperatorError(f"{q} is not a multiple of {A.q}")
    return MonomialOperator(A.perm, tuple(x * (q // A.q) for x in A.phase), q)


def tensor(A: MonomialOperator, B: MonomialOperator) -> MonomialOperator:
    q = A.q // gcd(A.q, B.q) * B.q
    A, B = lift(A, q), lift(B, q)
    dB = B.dim
    perm, phase = [], []
    for i in range(A.dim):
        for j in range(dB):
            perm.append(A.perm[i] * dB + B.perm[j])
            phase.append(A.phase[i] + B.phase[j])
    return MonomialOperator(tuple(perm), tuple(phase), q)


def inverse(A: MonomialOperator) -> MonomialOperator:
    perm = [0] * A.dim
    phase = [0] * A.dim
    for i, j in enumerate(A.perm):
        perm[j] = i
        phase[j] = -A.phase[i]
    return MonomialOperator(tuple(perm), tuple(phase), A.q)


def power(A: MonomialOperator, k: int) -> MonomialOperator:
    base = A if k >= 0 else inverse(A)
    out = identity(A.dim, A.q)
    k = abs(k)
    while k:
        if k & 1:
            out = multiply(out, base)
        base = multiply(base, base)
        k >>= 1
    return out


def is_scalar(A: MonomialOperator) -> Optional[int]:
    """j with A = w^j * identity, or None."""
    if any(i != x for i, x in enumerate(A.perm)) or len(set(A.phase)) > 1:
        return None
    return A.phase[0] if A.phase else 0


def commutator(A: MonomialOperator, B: MonomialOperator) -> MonomialOperator:
    return multiply(multiply(A, B), multiply(inverse(A), inverse(B)))


def default_q(p: int) -> int:
    return p if p % 2 else 2 * p


# --- assignments ----------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorAssignment:
    system: LinearSystem
    ops: Mapping[int, MonomialOperator]
    q: int

    def __post_init__(self):
        object.__setattr__(self, "ops", {int(j): X for j, X in self.ops.items()})

    @property
    def dim(self) -> int:
        return next(iter(self.ops.values())).dim if self.ops else 1

    def to_json(self, with_system: bool = True) -> dict:
        out = {"dim": self.dim, "q": self.q,
               "ops": {str(j): X.to_json() for j, X in sorted(self.ops.items())}}
        if with_system:
            out["system"] = self.system.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict, system: Optional[LinearSystem] = None) -> "OperatorAssignment":
        if system is None:
            if "system" not in data:
                raise OperatorError("assignment has no system; pass one explicitly")
            system = LinearSystem.from_json(data["system"])
        q = int(data["q"])
        ops = {int(j): MonomialOperator(tuple(o["perm"]), tuple(o["phase"]), q)
               for j, o in data["ops"].items()}
        for X in ops.values():
            if X.dim != int(data["dim"]):
                raise OperatorError("operator dimension disagrees with 'dim'")
        return cls(system, ops, q)


@dataclass
class Failure:
    condition: int  # 1: X^p = 1, 2: row equation, 3: commutation, 0: structural
    where: tuple
    detail: str


@dataclass
class VerificationReport:
    system: LinearSystem
    failures: list = field(default_factory=list)
    fingerprint: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"passed": self.passed, "fingerprint": self.fingerprint,
                "failures": [{"condition": f.condition, "where": list(f.where), "detail": f.detail}
                             for f in self.failures]}


def verify_operator_solution(a: OperatorAssignment) -> VerificationReport:
    """Check X_j^p = 1, commutation within each row, then the row products.

    Row products run over the row's columns in ascending order; J is the
    scalar w_p = w_q^(q/p).
    """
    S = a.system
    rep = VerificationReport(S)
    p = S.p
    if not p.is_finite:
        rep.failures.append(Failure(0, (), "operator solutions need a finite modulus"))
        return rep
    P = p.value
    if a.q % P:
        rep.failures.append(Failure(0, (), f"p = {P} does not divide q = {a.q}"))
        return rep
    missing = [j for j in range(S.n) if j not in a.ops]
    if missing:
        rep.failures.append(Failure(0, tuple(missing), "variables without an operator"))
        return rep
    dims = {X.dim for X in a.ops.values()}
    qs = {X.q for X in a.ops.values()}
    if len(dims) > 1 or qs != {a.q}:
        rep.failures.append(Failure(0, (), "operators differ in dimension or phase modulus"))
        return rep
    D = dims.pop() if dims else 1
    for j in range(S.n):
        if power(a.ops[j], P) != identity(D, a.q):
            rep.failures.append(Failure(1, (j,), f"X_{S.col_name(j)}^{P} is not the identity"))
    commuting = True
    for i in range(S.m):
        R = S.support(i)
        for x in range(len(R)):
            for y in range(x + 1, len(R)):
                j, k = R[x], R[y]
                if is_scalar(commutator(a.ops[j], a.ops[k])) != 0:
                    commuting = False
                    rep.failures.append(Failure(3, (i, j, k),
                                                f"X_{S.col_name(j)} and X_{S.col_name(k)} do not commute "
                                                f"(row {S.row_name(i)})"))
    for i in range(S.m):
        prod = identity(D, a.q)
        for j in S.support(i):
            prod = multiply(prod, power(a.ops[j], S.A[i][j]))
        want = (a.q // P) * S.b[i] % a.q
        got = is_scalar(prod)
        if got != want:
            note = "" if commuting else " (order-dependent: some row variables do not commute)"
            rep.failures.append(Failure(2, (i,), f"row {S.row_name(i)}: product is "
                                        f"{'not scalar' if got is None else f'w_q^{got}'}, "
                                        f"expected w_q^{want}{note}"))
    if rep.passed:
        blob = json.dumps(a.to_json(), sort_keys=True, separators=(",", ":"))
        rep.fingerprint = hashlib.sha256(blob.encode()).hexdigest()
    return rep


def identity_assignment(system: LinearSystem, q: Optional[int] = None) -> OperatorAssignment:
    P = system.p.value
    q = q or default_q(P)
    return OperatorAssignment(system, {j: identity(1, q) for j in range(system.n)}, q)


def mermin_peres_square(q: int = 4) -> list[list[MonomialOperator]]:
    """The 3x3 two-qubit square: rows multiply to I, columns to I, I, -I."""
    X, Z = weyl_generators(2, q)
    I = identity(2, q)
    t = tensor
    c1 = t(X, Z)
    c2 = t(Z, X)
    return [
        [t(X, I), t(I, X), t(X, X)],
        [t(I, Z), t(Z, I), t(Z, Z)],
        [c1, c2, inverse(multiply(c1, c2))],
    ]


def mermin_peres_assignment(system: LinearSystem, row_vertices: Sequence = "abc",
                            col_vertices: Sequence = "231") -> OperatorAssignment:
    """Place the square on the K33 incidence system.

    Square entry (r, c) goes to the edge joining ``row_vertices[r]`` and
    ``col_vertices[c]``; the default column order puts the -I column of the
    square on vertex 1, which carries the colour.
    """
    sq = mermin_peres_square(4)
    names = list(system.col_names)
    ops = {}
    for r, u in enumerate(row_vertices):
        for c, v in enumerate(col_vertices):
            for cand in (f"{u}-{v}", f"{v}-{u}"):
                if cand in names:
                    ops[names.index(cand)] = sq[r][c]
                    break
            else:
                raise OperatorError(f"no edge between {u} and {v}")
    return OperatorAssignment(system, ops, 4)


__all__ = [
    "MonomialOperator", "OperatorAssignment", "VerificationReport", "Failure", "OperatorError",
    "weyl_generators", "multiply", "tensor", "inverse", "power", "is_scalar", "identity", "scalar",
    "commutator", "lift", "default_q", "verify_operator_solution", "identity_assignment",
    "mermin_peres_square", "mermin_peres_assignment",
]
