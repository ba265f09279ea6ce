"""Order facts about J in solution groups and a small deduction calculus.

Orders live in the divisibility lattice of the non-negative integers, with
``0`` standing for infinite order (every integer divides 0).  So

* ``DIVIDES(n)``  means ``J^n = 1``; ``DIVIDES(0)`` says nothing;
* ``AT_LEAST(n)`` means ``n`` divides ``|J|``; ``AT_LEAST(0)`` means J has
  infinite order;
* ``EXACT(n)`` is both.

The name AT_LEAST matches the usual reading for finite orders, where
``n | |J|`` implies ``|J| >= n``.
"""
from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence

from .hypergraph import from_matrix, theorem_hypothesis
from .zmod import INF, Modulus, smith_normal_form


class OrderError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return a // gcd(a, b) * b


def _divides(a: int, b: int) -> bool:
    """a | b in the lattice where 0 is the top element."""
    return b % a == 0 if a else b == 0


def _pval(p: Modulus) -> int:
    return p.value if p.is_finite else 0


def fmt_order(n: int) -> str:
    return "inf" if n == 0 else str(n)


# --- systems ---------------------------------------------------------------------

def _incidence_graph_connected(A) -> Optional[bool]:
    """None unless A is a signed incidence matrix; then whether its graph is connected."""
    m = len(A)
    if m == 0:
        return None
    n = len(A[0])
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in range(n):
        col = [A[i][j] for i in range(m)]
        nz = [i for i, x in enumerate(col) if x]
        if len(nz) != 2 or sorted(col[i] for i in nz) != [-1, 1]:
            return None
        a, b = find(nz[0]), find(nz[1])
        parent[a] = b
    return len({find(i) for i in range(m)}) == 1


@dataclass(frozen=True)
class Family:
    """A matrix A; facts about different b and p share one family."""

    A: tuple
    name: str = ""
    key: str = field(init=False, compare=True)
    connected_incidence: bool = field(init=False, compare=False)

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in r) for r in self.A)
        object.__setattr__(self, "A", A)
        blob = json.dumps([list(r) for r in A]).encode()
        object.__setattr__(self, "key", hashlib.sha256(blob).hexdigest()[:16])
        object.__setattr__(self, "connected_incidence", bool(_incidence_graph_connected(A)))

    def __eq__(self, other):
        return isinstance(other, Family) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def label(self) -> str:
        return self.name or self.key


@dataclass(frozen=True)
class SystemRef:
    """Which group a fact is about: Gamma_p(A, b).  ``b=None`` means every b."""

    family: Family
    b: Optional[tuple]
    p: Modulus

    def __post_init__(self):
        object.__setattr__(self, "p", Modulus.of(self.p))
        if self.b is not None:
            b = tuple(int(x) for x in self.b)
            if len(b) != len(self.family.A):
                raise OrderError("b does not match the number of rows of A")
            object.__setattr__(self, "b", b)

    def with_b(self, b) -> "SystemRef":
        return SystemRef(self.family, b, self.p)

    def with_p(self, p) -> "SystemRef":
        return SystemRef(self.family, self.b, p)

    @property
    def colour_sum(self) -> int:
        return sum(self.b)

    def __str__(self):
        b = "all b" if self.b is None else ",".join(map(str, self.b))
        return f"Gamma_{self.p}({self.family.label}; {b})"


def ref_of(system, name: str = "") -> SystemRef:
    return SystemRef(Family(system.A, name), system.b, system.p)


class FactKind(str, enum.Enum):
    DIVIDES = "DIVIDES"
    AT_LEAST = "AT_LEAST"
    EXACT = "EXACT"


@dataclass(frozen=True)
class OrderFact:
    ref: SystemRef
    kind: FactKind
    n: int
    provenance: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise OrderError("order values are non-negative")
        P = _pval(self.ref.p)
        if P:
            if self.kind is FactKind.DIVIDES:
                object.__setattr__(self, "n", gcd(self.n, P))  # J^p = 1 always
            elif not _divides(self.n, P):
                raise OrderError(f"{self.kind.value}({self.n}) impossible when p = {P}")

    @property
    def upper(self) -> int:
        return self.n if self.kind is not FactKind.AT_LEAST else _pval(self.ref.p)

    @property
    def lower(self) -> int:
        return self.n if self.kind is not FactKind.DIVIDES else 1

    def __str__(self):
        return f"{self.kind.value}({fmt_order(self.n)}) for {self.ref}"

    def to_json(self) -> dict:
        return {"system": str(self.ref), "p": self.ref.p.to_json(),
                "b": None if self.ref.b is None else list(self.ref.b),
                "kind": self.kind.value, "n": fmt_order(self.n), "provenance": list(self.provenance)}


def DIVIDES(ref, n, *prov):
    return OrderFact(ref, FactKind.DIVIDES, n, tuple(prov))


def AT_LEAST(ref, n, *prov):
    return OrderFact(ref, FactKind.AT_LEAST, n, tuple(prov))


def EXACT(ref, n, *prov):
    return OrderFact(ref, FactKind.EXACT, n, tuple(prov))


def _merge_prov(*facts) -> tuple:
    out = []
    for f in facts:
        for x in f.provenance:
            if x not in out:
                out.append(x)
    return tuple(out)


# --- fact sources ------------------------------------------------------------------

def upper_from_picture(cert, name: str = "") -> OrderFact:
    """J^phase = 1, so |J| divides gcd(phase, p)."""
    ref = ref_of(cert.system, name)
    n = abs(cert.phase)
    if ref.p.is_finite:
        n = gcd(n, ref.p.value)
    return DIVIDES(ref, n, f"picture:{cert.picture_hash[:16]} phase {cert.phase}")


def entries_are_units(A, p) -> bool:
    """Every non-zero entry of A is invertible in Z_p (is +-1 when p is infinite)."""
    p = Modulus.of(p)
    for row in A:
        for x in row:
            if x and (gcd(x, p.value) != 1 if p.is_finite else abs(x) != 1):
                return False
    return True


def exact_from_theorem(A, p, name: str = "") -> OrderFact:
    """|J| = p for every b, when H(A) meets the degree/girth hypothesis.

    We also require the non-zero entries of A to be units mod p.  Without
    that the local groups need not be free, and the conclusion can fail:
    for A = 2 I(Heawood), p = 2 and odd b_1, row 1 forces J = 1.
    """
    verdict = theorem_hypothesis(from_matrix(A, len(A[0]) if A else 0))
    if not verdict.qualifies:
        raise OrderError("H(A) satisfies neither the (4,4) nor the (3,6) hypothesis")
    p = Modulus.of(p)
    if not entries_are_units(A, p):
        raise OrderError(f"some non-zero entry of A is not a unit mod {p}")
    return EXACT(SystemRef(Family(A, name), None, p), _pval(p), f"theorem:{verdict.value}")


def lower_from_operator_solution(report, name: str = "") -> OrderFact:
    if not getattr(report, "passed", False):
        raise OrderError("operator solution was not verified")
    ref = ref_of(report.system, name)
    return EXACT(ref, _pval(ref.p), f"operators:{report.fingerprint[:16]}")


# --- transfer rules ----------------------------------------------------------------

def hom_conditions(p, q, alpha, beta, lam, delta) -> bool:
    """q | p*gcd(lam, delta) and delta*alpha = beta*lam in Z_q."""
    p, q = Modulus.of(p), Modulus.of(q)
    return _divides(_pval(q), _pval(p) * gcd(lam, delta)) and q.is_zero(delta * alpha - beta * lam)


def _scaled_ref(known: OrderFact, alpha: int, beta: int, q, b) -> SystemRef:
    ref = known.ref
    if ref.b is None:
        return SystemRef(ref.family, None, q)
    if b is None:
        if alpha == 0 or any(x % alpha for x in ref.b):
            raise OrderError("cannot recover the base colouring; pass b explicitly")
        b = [x // alpha for x in ref.b]
    if tuple(alpha * x for x in b) != ref.b:
        raise OrderError("known fact is not about alpha*b")
    return SystemRef(ref.family, tuple(beta * x for x in b), q)


def hom_transfer(p, q, alpha: int, beta: int, lam: int, delta: int, known: OrderFact,
                 b: Optional[Sequence[int]] = None) -> OrderFact:
    """Push a fact along Gamma_p(A, alpha b) -> Gamma_q(A, beta b), J -> J^delta.

    Only the upper bound travels forwards: J^n = 1 gives (J^delta)^n = 1.
    """
    p, q = Modulus.of(p), Modulus.of(q)
    if known.ref.p != p:
        raise OrderError("known fact is about a different modulus")
    if not hom_conditions(p, q, alpha, beta, lam, delta):
        raise OrderError(f"no homomorphism: need {q} | {p}*gcd({lam},{delta}) and "
                         f"{delta}*{alpha} = {beta}*{lam} mod {q}")
    target = _scaled_ref(known, alpha, beta, q, b)
    return DIVIDES(target, abs(delta) * known.upper,
                   *known.provenance, f"hom({p}->{q}, J->J^{delta})")


def hom_pullback(p, q, alpha: int, beta: int, lam: int, delta: int, known: OrderFact,
                 b: Optional[Sequence[int]] = None) -> OrderFact:
    """Pull a lower bound on the target back to the source.

    The order of J^delta in the target divides |J| in the source, and if
    m | |J_target| then m/gcd(m, delta) divides the order of J^delta.
    """
    p, q = Modulus.of(p), Modulus.of(q)
    if known.ref.p != q:
        raise OrderError("known fact is about a different modulus")
    if not hom_conditions(p, q, alpha, beta, lam, delta):
        raise OrderError("no homomorphism for these parameters")
    ref = known.ref
    if ref.b is None:
        source = SystemRef(ref.family, None, p)
    else:
        if b is None:
            if beta == 0 or any(x % beta for x in ref.b):
                raise OrderError("cannot recover the base colouring; pass b explicitly")
            b = [x // beta for x in ref.b]
        source = SystemRef(ref.family, tuple(alpha * x for x in b), p)
    m = known.lower
    n = m // gcd(m, delta) if delta else 1
    return AT_LEAST(source, n, *known.provenance, f"pullback({p}->{q}, J->J^{delta})")


def crt_combine(r: int, s: int, f_r: OrderFact, f_s: OrderFact) -> OrderFact:
    if gcd(r, s) != 1:
        raise OrderError(f"moduli {r} and {s} are not coprime")
    if f_r.kind is FactKind.AT_LEAST or f_s.kind is FactKind.AT_LEAST:
        raise OrderError("crt_combine needs exact orders")
    for f, m in ((f_r, r), (f_s, s)):
        if f.ref.p != Modulus(m):
            raise OrderError(f"fact {f} is not about modulus {m}")
        if f.kind is FactKind.DIVIDES and f.n != 1:
            raise OrderError("crt_combine needs exact orders")
    if f_r.ref.family != f_s.ref.family or f_r.ref.b != f_s.ref.b:
        raise OrderError("facts are about different systems")
    ref = f_r.ref.with_p(r * s)
    return EXACT(ref, f_r.n * f_s.n, *_merge_prov(f_r, f_s), f"crt({r},{s})")


class Mode(str, enum.Enum):
    UNIT_SCALE = "UNIT_SCALE"
    MULTIPLE_LIFT = "MULTIPLE_LIFT"
    ZERO_B = "ZERO_B"


def b_scale_facts(mode, t: int, p, known: Optional[OrderFact] = None,
                  family: Optional[Family] = None) -> OrderFact:
    mode, p = Mode(mode), Modulus.of(p)
    P = _pval(p)
    if mode is Mode.ZERO_B:
        fam = known.ref.family if known is not None else family
        if fam is None:
            raise OrderError("ZERO_B needs a family or a known fact")
        return EXACT(SystemRef(fam, (0,) * len(fam.A), p), P, "zero colouring")
    if known is None or known.ref.p != p:
        raise OrderError("known fact must be about the given modulus")
    ref = known.ref
    if ref.b is None:
        raise OrderError("fact already holds for every b")
    if mode is Mode.UNIT_SCALE:
        if t == 0 or (P and gcd(t, P) != 1):
            raise OrderError(f"{t} is a zero divisor mod {p}")
        if not P and (known.kind is not FactKind.EXACT or known.n != 0):
            raise OrderError("over Z only |J| = inf transfers under scaling")
        new = ref.with_b(tuple(t * x for x in ref.b))
        return OrderFact(new, known.kind, known.n, known.provenance + (f"scale b by unit {t}",))
    # MULTIPLE_LIFT
    if not P:
        raise OrderError("MULTIPLE_LIFT needs a finite modulus")
    if t < 1:
        raise OrderError("lift factor must be positive")
    if known.kind is not FactKind.EXACT or known.n != P:
        raise OrderError("MULTIPLE_LIFT needs |J| = p")
    new = SystemRef(ref.family, tuple(t * x for x in ref.b), t * P)
    return EXACT(new, t * P, *known.provenance, f"lift by {t}")


# --- deduction -----------------------------------------------------------------------

def _prime_powers(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            q = 1
            while n % d == 0:
                n //= d
                q *= d
            out.append(q)
        d += 1
    if n > 1:
        out.append(n)
    return out


def _order_in(k: int, P: int) -> int:
    """Additive order of k in Z_P (P=0 is Z, where non-zero elements have order 0=inf)."""
    if P == 0:
        return 1 if k == 0 else 0
    return P // gcd(k, P)


@dataclass
class _State:
    div: int
    atl: int = 1
    div_prov: tuple = ()
    atl_prov: tuple = ()


@dataclass(frozen=True)
class Inconsistency:
    ref: SystemRef
    lower: int
    upper: int
    provenance: tuple

    def __str__(self):
        return (f"{self.ref}: {fmt_order(self.lower)} must divide |J| but |J| divides "
                f"{fmt_order(self.upper)}")


@dataclass
class Closure:
    states: dict
    inconsistencies: list

    @property
    def consistent(self) -> bool:
        return not self.inconsistencies

    def facts(self) -> list[OrderFact]:
        out = []
        for ref in sorted(self.states, key=_ref_key):
            st = self.states[ref]
            if st.atl == st.div:
                out.append(EXACT(ref, st.div, *_uniq(st.div_prov + st.atl_prov)))
                continue
            if st.div != _pval(ref.p):
                out.append(DIVIDES(ref, st.div, *st.div_prov))
            if st.atl != 1:
                out.append(AT_LEAST(ref, st.atl, *st.atl_prov))
        return out

    def about(self, ref: SystemRef) -> Optional[OrderFact]:
        """Strongest single fact about one group (EXACT when known)."""
        st = self.states.get(ref)
        if st is None:
            return None
        if st.atl == st.div:
            return EXACT(ref, st.div, *_uniq(st.div_prov + st.atl_prov))
        if st.atl != 1:
            return AT_LEAST(ref, st.atl, *st.atl_prov)
        return DIVIDES(ref, st.div, *st.div_prov)

    def exact(self, ref: SystemRef) -> Optional[int]:
        st = self.states.get(ref)
        return st.div if st is not None and st.div == st.atl else None


def _uniq(xs) -> tuple:
    out = []
    for x in xs:
        if x not in out:
            out.append(x)
    return tuple(out)


def _ref_key(ref: SystemRef):
    return (ref.family.key, ref.b is not None, ref.b or (), _pval(ref.p) or 10 ** 18)


def deduce(facts: Iterable[OrderFact], targets: Iterable[SystemRef] = (), max_rounds: int = 1000) -> Closure:
    """Fixed point of the transfer rules over the given facts.

    Rules: combine bounds per group (gcd of upper bounds, lcm of lower);
    J^p = 1; facts for every b specialise to each b; b = 0 gives |J| = p;
    homomorphisms Gamma_p(A,b) -> Gamma_q(A,b), J -> J^d with
    d = q/gcd(p, q); prime-power splitting of composite moduli; unit
    rescaling of b; for connected incidence systems, equal |b| in Z_p gives
    isomorphic groups, and so does |b| of equal order.
    Contradictions are collected, not raised.
    """
    facts = list(facts)
    states: dict = {}

    def ensure(ref):
        if ref not in states:
            states[ref] = _State(_pval(ref.p), 1, ("J^p = 1",) if ref.p.is_finite else ())
        return states[ref]

    changed = [False]

    def push_div(ref, n, prov):
        st = ensure(ref)
        P = _pval(ref.p)
        n = gcd(n, P) if P else n
        new = gcd(st.div, n)
        if new != st.div:
            st.div, st.div_prov = new, _uniq(prov)
            changed[0] = True

    def push_atl(ref, n, prov):
        st = ensure(ref)
        new = _lcm(st.atl, n)
        if new != st.atl:
            st.atl, st.atl_prov = new, _uniq(prov)
            changed[0] = True

    def push(f):
        if f.kind is not FactKind.AT_LEAST:
            push_div(f.ref, f.n, f.provenance)
        if f.kind is not FactKind.DIVIDES:
            push_atl(f.ref, f.n, f.provenance)

    for f in facts:
        push(f)
    for ref in targets:
        ensure(ref)
    for ref in list(states):
        if ref.p.is_finite:
            for q in _prime_powers(ref.p.value):
                if q != ref.p.value:
                    ensure(ref.with_p(q))

    for _ in range(max_rounds):
        changed[0] = False
        refs = sorted(states, key=_ref_key)
        for ref in refs:
            st = states[ref]
            P = _pval(ref.p)
            if ref.b is not None and not any(ref.b):
                push_div(ref, P, ("zero colouring",))
                push_atl(ref, P, ("zero colouring",))
            if ref.b is not None and ref.family.connected_incidence and ref.p.is_zero(ref.colour_sum):
                push_atl(ref, P, ("|b| = 0 in Z_p",))
        for src in refs:
            s = states[src]
            for dst in refs:
                if dst is src or dst.family != src.family:
                    continue
                d = states[dst]
                if dst.p == src.p and src.b is None and dst.b is not None:
                    push_div(dst, s.div, s.div_prov)
                    push_atl(dst, s.atl, s.atl_prov)
                    continue
                if dst.b == src.b and dst.p != src.p:
                    P, Q = _pval(src.p), _pval(dst.p)
                    if Q == 0 and P != 0:
                        continue  # only J -> J^0 exists
                    delta = Q // gcd(P, Q) if Q else 1
                    push_div(dst, delta * s.div, s.div_prov + (f"hom {src.p}->{dst.p}",))
                    m = d.atl
                    push_atl(src, m // gcd(m, delta) if m else 0, d.atl_prov + (f"pullback {src.p}->{dst.p}",))
                    continue
                if dst.p != src.p or src.b is None or dst.b is None:
                    continue
                P = _pval(src.p)
                if _unit_multiple(src.b, dst.b, P):
                    push_div(dst, s.div, s.div_prov + ("unit rescaling of b",))
                    push_atl(dst, s.atl, s.atl_prov + ("unit rescaling of b",))
                if src.family.connected_incidence:
                    # |b| and |b'| of equal order in Z_p differ by a unit, so the groups are isomorphic
                    k1, k2 = src.colour_sum, dst.colour_sum
                    if src.p.reduce(k1) == src.p.reduce(k2):
                        push_div(dst, s.div, s.div_prov + ("equal |b|",))
                        push_atl(dst, s.atl, s.atl_prov + ("equal |b|",))
                    elif P and _order_in(k1, P) == _order_in(k2, P):
                        push_div(dst, s.div, s.div_prov + ("same order of |b|",))
                        push_atl(dst, s.atl, s.atl_prov + ("same order of |b|",))
        if not changed[0]:
            break
    bad = []
    for ref in sorted(states, key=_ref_key):
        st = states[ref]
        if not _divides(st.atl, st.div):
            bad.append(Inconsistency(ref, st.atl, st.div, _uniq(st.atl_prov + st.div_prov)))
    return Closure(states, bad)


def _unit_multiple(b1, b2, P) -> bool:
    """b2 = t*b1 for some t invertible mod P (P finite)."""
    if not P:
        return False
    for t in range(1, P):
        if gcd(t, P) == 1 and all((t * x - y) % P == 0 for x, y in zip(b1, b2)):
            return True
    return False


# --- abelianization oracle -------------------------------------------------------------

def abelian_order(A, b, p, ncols: Optional[int] = None) -> int:
    """Order of J in the abelianization of Gamma_p(A, b) (0 means infinite).

    The abelianization is Z^{n+1} modulo the rows of [A | -b] and, for
    finite p, p times every unit vector.  It is a quotient of the group,
    so this order divides |J|.
    """
    p = Modulus.of(p)
    n = len(A[0]) if A else (ncols or 0)
    rows = [list(map(int, r)) + [-int(x)] for r, x in zip(A, b)]
    if p.is_finite:
        rows += [[p.value * int(i == j) for j in range(n + 1)] for i in range(n + 1)]
    if not rows:
        return 0
    _, D, V = smith_normal_form(rows, n + 1)
    y = V[n]  # e_J in the diagonal coordinates
    order = 1
    for i in range(n + 1):
        d = D[i][i] if i < len(D) else 0
        if d == 0:
            if y[i]:
                return 0
        else:
            order = _lcm(order, d // gcd(d, y[i]))
    return order


def check_against_abelianization(f: OrderFact, samples: Sequence[Sequence[int]] = ()) -> bool:
    """Every upper bound on |J| must be a multiple of the abelian order."""
    A = f.ref.family.A
    bs = [f.ref.b] if f.ref.b is not None else list(samples)
    for b in bs:
        ab = abelian_order(A, b, f.ref.p, len(A[0]) if A else 0)
        if f.kind is not FactKind.AT_LEAST and not _divides(ab, f.n):
            return False
    return True


__all__ = [
    "Family", "SystemRef", "OrderFact", "FactKind", "DIVIDES", "AT_LEAST", "EXACT", "OrderError",
    "upper_from_picture", "exact_from_theorem", "entries_are_units", "lower_from_operator_solution", "hom_conditions",
    "hom_transfer", "hom_pullback", "crt_combine", "Mode", "b_scale_facts", "deduce", "Closure",
    "Inconsistency", "abelian_order", "check_against_abelianization", "ref_of", "INF",
]
