"""Closed pictures for solution groups.

A picture is a plane digraph (a :class:`CombinatorialMap` plus a source
dart for every edge) whose vertices are labelled by rows of ``A`` and
whose edges are labelled by columns, together with exponents ``a(e)`` on
edges and ``k(v)`` on vertices.  A valid picture of phase ``k`` certifies
``J^k = 1`` in the solution group.

Vertices with no incident edges cannot live in a combinatorial map, so a
picture keeps them in a separate ``isolated`` tuple.
"""
from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from . import planemap
from .planemap import CombinatorialMap
from .zmod import INF, Modulus, cyclic_membership, shape


@dataclass(frozen=True)
class LinearSystem:
    A: tuple
    b: tuple
    p: Modulus
    row_names: Optional[tuple] = None
    col_names: Optional[tuple] = None
    ncols: Optional[int] = None

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.A)
        m, n = shape(A, self.ncols)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "ncols", n)
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        object.__setattr__(self, "p", Modulus.of(self.p))
        if len(self.b) != m:
            raise ValueError(f"b has length {len(self.b)} but A has {m} rows")
        for names, size in ((self.row_names, m), (self.col_names, n)):
            if names is not None and len(names) != size:
                raise ValueError("name list has the wrong length")
        if self.row_names is not None:
            object.__setattr__(self, "row_names", tuple(self.row_names))
        if self.col_names is not None:
            object.__setattr__(self, "col_names", tuple(self.col_names))

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return self.ncols

    def support(self, i: int) -> tuple:
        """R_i(A): the columns with a non-zero entry in row i."""
        return tuple(j for j, x in enumerate(self.A[i]) if x != 0)

    def local_relation(self, i: int) -> tuple:
        """``(A_i restricted to R_i, -b_i)``: generates the relations of the local group."""
        return tuple(self.A[i][j] for j in self.support(i)) + (-self.b[i],)

    def row_name(self, i: int) -> str:
        return str(self.row_names[i]) if self.row_names else str(i)

    def col_name(self, j: int) -> str:
        return str(self.col_names[j]) if self.col_names else str(j)

    def with_b(self, b: Sequence[int]) -> "LinearSystem":
        return replace(self, b=tuple(b))

    def with_p(self, p) -> "LinearSystem":
        return replace(self, p=Modulus.of(p))

    def to_json(self) -> dict:
        out = {"A": [list(r) for r in self.A], "b": list(self.b), "p": self.p.to_json()}
        if not self.A:
            out["ncols"] = self.n
        if self.row_names:
            out["rows"] = list(self.row_names)
        if self.col_names:
            out["cols"] = list(self.col_names)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "LinearSystem":
        return cls(tuple(tuple(r) for r in data["A"]), tuple(data["b"]), Modulus.of(data.get("p", "inf")),
                   tuple(data["rows"]) if data.get("rows") else None,
                   tuple(data["cols"]) if data.get("cols") else None,
                   data.get("ncols"))


class Kind(str, enum.Enum):
    INCIDENCE = "INCIDENCE"
    VERTEX_EQUATION = "VERTEX_EQUATION"
    NOT_PLANAR = "NOT_PLANAR"
    LOOP = "LOOP"
    ZERO_EDGE = "ZERO_EDGE"
    SAME_LABEL_FACE_PAIR = "SAME_LABEL_FACE_PAIR"
    LOW_DEGREE = "LOW_DEGREE"
    MONO_CYCLE = "MONO_CYCLE"


@dataclass(frozen=True)
class Violation:
    kind: Kind
    witness: tuple
    detail: str = ""


class InvalidPicture(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{v.kind.value}: {v.detail}" for v in self.violations[:5]))


class MoveNotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class Picture:
    system: LinearSystem
    map: Optional[CombinatorialMap]
    direction: Mapping[int, int]  # edge -> dart at the source end
    hV: Mapping
    hE: Mapping[int, int]
    a: Mapping[int, int]
    k: Mapping
    isolated: tuple = ()

    def __post_init__(self):
        p = self.system.p
        object.__setattr__(self, "direction", dict(self.direction))
        object.__setattr__(self, "hV", dict(self.hV))
        object.__setattr__(self, "hE", dict(self.hE))
        object.__setattr__(self, "a", {e: p.reduce(int(x)) for e, x in self.a.items()})
        object.__setattr__(self, "k", {v: p.reduce(int(x)) for v, x in self.k.items()})
        object.__setattr__(self, "isolated", tuple(self.isolated))
        M = self.map
        verts = set(self.vertices)
        if len(verts) != len(self.vertices):
            raise ValueError("isolated vertex also appears in the map")
        edges = set(self.edges)
        for name, dom, want in (("hV", self.hV, verts), ("k", self.k, verts),
                                ("hE", self.hE, edges), ("a", self.a, edges),
                                ("direction", self.direction, edges)):
            if set(dom) != want:
                raise ValueError(f"labels {name} are not total on the picture")
        for e, d in self.direction.items():
            if d not in (e, M.pairing[e]):
                raise ValueError(f"direction of edge {e} is not one of its darts")

    # -- structure -------------------------------------------------------------
    @property
    def vertices(self) -> list:
        return (list(self.map.rotation) if self.map else []) + list(self.isolated)

    @property
    def edges(self) -> list[int]:
        return self.map.edges if self.map else []

    @property
    def size(self) -> int:
        """V + E."""
        return len(self.vertices) + len(self.edges)

    def source(self, e: int):
        return self.map.origin[self.direction[e]]

    def target(self, e: int):
        return self.map.origin[self.map.pairing[self.direction[e]]]

    def degree(self, v) -> int:
        return self.map.degree(v) if self.map and v in self.map.rotation else 0

    def signed_value(self, d: int) -> int:
        """Exponent contributed at the origin of dart d: +a at the target end, -a at the source."""
        e = self.map.edge_of(d)
        return -self.a[e] if self.direction[e] == d else self.a[e]

    def net_exponents(self, v) -> dict:
        c: dict = {}
        if self.map and v in self.map.rotation:
            for d in self.map.rotation[v]:
                j = self.hE[self.map.edge_of(d)]
                c[j] = c.get(j, 0) + self.signed_value(d)
        return c

    # -- serialization -----------------------------------------------------------
    def to_json(self) -> dict:
        M = self.map
        base = M.to_json() if M else {"darts": [], "pairing": [], "rotation": {}}
        for v in self.isolated:
            base["rotation"][str(v)] = []
        base.update({
            "direction": {str(e): d for e, d in sorted(self.direction.items())},
            "hV": {str(v): i for v, i in self.hV.items()},
            "hE": {str(e): j for e, j in sorted(self.hE.items())},
            "a": {str(e): x for e, x in sorted(self.a.items())},
            "k": {str(v): x for v, x in self.k.items()},
            "system": self.system.to_json(),
        })
        return base

    @classmethod
    def from_json(cls, data: dict) -> "Picture":
        system = LinearSystem.from_json(data["system"])
        isolated = tuple(v for v, ds in data["rotation"].items() if not ds)
        rot = {v: ds for v, ds in data["rotation"].items() if ds}
        M = CombinatorialMap.from_json({**data, "rotation": rot}) if rot else None
        return cls(system, M,
                   {int(e): int(d) for e, d in data["direction"].items()},
                   {v: int(i) for v, i in data["hV"].items()},
                   {int(e): int(j) for e, j in data["hE"].items()},
                   {int(e): int(x) for e, x in data["a"].items()},
                   {v: int(x) for v, x in data["k"].items()},
                   isolated)

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def empty_picture(system: LinearSystem) -> Picture:
    return Picture(system, None, {}, {}, {}, {}, {})


# --- verification ----------------------------------------------------------------

def verify(P: Picture) -> list[Violation]:
    """All violations of the picture conditions; an empty list means valid.

    Checks edge labels against ``R_{hV(v)}``, the vertex equation in the
    abelian local group (via cyclic membership of the net exponent vector
    in the subgroup generated by the local relation), and planarity.
    """
    S, p = P.system, P.system.p
    out = []
    for v in P.vertices:
        i = P.hV[v]
        if not 0 <= i < S.m:
            out.append(Violation(Kind.INCIDENCE, (v,), f"row label {i} out of range at vertex {v}"))
            continue
        R = S.support(i)
        Rset = set(R)
        bad = False
        if P.map and v in P.map.rotation:
            for d in P.map.rotation[v]:
                e = P.map.edge_of(d)
                if P.hE[e] not in Rset:
                    out.append(Violation(Kind.INCIDENCE, (v, e),
                                         f"edge {e} labelled {P.hE[e]} not in R_{i} at vertex {v}"))
                    bad = True
        if bad:
            continue
        c = P.net_exponents(v)
        vec = tuple(c.get(j, 0) for j in R) + (-P.k[v],)
        if cyclic_membership(S.local_relation(i), vec, p) is None:
            out.append(Violation(Kind.VERTEX_EQUATION, (v,),
                                 f"vertex {v}: exponents {dict(sorted(c.items()))} != J^{P.k[v]} in local group {i}"))
    if P.map is not None:
        for comp, (V, E, F) in zip(P.map.components(), planemap.euler_characteristics(P.map)):
            if V - E + F != 2:
                out.append(Violation(Kind.NOT_PLANAR, tuple(comp), f"component has V-E+F = {V - E + F}"))
    return out


def is_valid(P: Picture) -> bool:
    return not verify(P)


def phase(P: Picture) -> int:
    return P.system.p.reduce(sum(P.k.values()))


@dataclass(frozen=True)
class Certificate:
    system: LinearSystem
    phase: int
    picture_hash: str

    @property
    def conclusion(self) -> str:
        return f"J^{self.phase} = 1 in Gamma_{self.system.p}(A,b)"

    def to_json(self) -> dict:
        return {"system": self.system.to_json(), "phase": self.phase,
                "picture_hash": self.picture_hash, "conclusion": self.conclusion}


def certify(P: Picture) -> Certificate:
    violations = verify(P)
    if violations:
        raise InvalidPicture(violations)
    return Certificate(P.system, phase(P), P.fingerprint())


def flip_orientation(P: Picture, S: Iterable[int]) -> Picture:
    """Reverse the edges in S and negate their exponents."""
    S = set(S)
    unknown = S - set(P.edges)
    if unknown:
        raise KeyError(f"unknown edges {sorted(unknown)}")
    direction = dict(P.direction)
    a = dict(P.a)
    for e in S:
        direction[e] = P.map.pairing[direction[e]]
        a[e] = -a[e]
    return replace(P, direction=direction, a=a)


# --- reducibility witnesses -------------------------------------------------------

def _sorted_vertices(vs):
    return sorted(vs, key=str)


def iter_violations(P: Picture) -> Iterator[Violation]:
    """Reducibility witnesses in the fixed order LOOP, ZERO_EDGE,
    SAME_LABEL_FACE_PAIR, LOW_DEGREE, MONO_CYCLE."""
    M = P.map
    p = P.system.p
    edges = P.edges
    for e in edges:
        if M.is_loop(e):
            yield Violation(Kind.LOOP, (e,), f"edge {e} is a loop")
    for e in edges:
        if not M.is_loop(e) and p.is_zero(P.a[e]):
            yield Violation(Kind.ZERO_EDGE, (e,), f"edge {e} has a = 0")
    if M is not None:
        trace = planemap.trace_faces(M)
        pairs = {}
        for fi, face in enumerate(trace.faces):
            first = {}
            for d in face:
                v = M.origin[d]
                first.setdefault(v, d)
            by_label: dict = {}
            for v in first:
                by_label.setdefault(P.hV[v], []).append(v)
            for vs in by_label.values():
                vs = _sorted_vertices(vs)
                for x in range(len(vs)):
                    for y in range(x + 1, len(vs)):
                        pairs.setdefault((str(vs[x]), str(vs[y])), (vs[x], vs[y], fi))
        for key in sorted(pairs):
            v, w, fi = pairs[key]
            yield Violation(Kind.SAME_LABEL_FACE_PAIR, (v, w, trace.faces[fi]),
                            f"vertices {v} and {w} share label {P.hV[v]} on a face")
    for v in _sorted_vertices(P.vertices):
        r = len(P.system.support(P.hV[v]))
        if P.degree(v) < min(4, r):
            yield Violation(Kind.LOW_DEGREE, (v,), f"vertex {v} has degree {P.degree(v)} < min(4, {r})")
    if M is not None:
        by_label: dict = {}
        for e in edges:
            if not M.is_loop(e):
                by_label.setdefault(P.hE[e], []).append(e)
        for j in sorted(by_label):
            cyc = _find_cycle(M, by_label[j])
            if cyc is not None:
                yield Violation(Kind.MONO_CYCLE, cyc, f"cycle with all edges labelled {j}")


def find_violation(P: Picture) -> Optional[Violation]:
    if verify(P):
        raise InvalidPicture(verify(P))
    return next(iter_violations(P), None)


def _find_cycle(M: CombinatorialMap, edges: Sequence[int]) -> Optional[tuple]:
    """First cycle (v1, e1, ..., vk, ek, v1) closed by an edge in ``edges``."""
    parent: dict = {}
    adj: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        u, v = M.ends(e)
        if find(u) == find(v):
            path = _forest_path(adj, v, u)  # v ... u in the forest
            out = []
            for i in range(0, len(path) - 1, 2):
                out.extend(path[i:i + 2])
            out.append(u)
            out.append(e)
            out.append(path[0])
            return tuple(out)
        parent[find(u)] = find(v)
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    return None


def _forest_path(adj, s, t) -> list:
    """Alternating vertex/edge path from s to t in a forest."""
    prev = {s: None}
    stack = [s]
    while stack:
        x = stack.pop()
        if x == t:
            break
        for y, e in adj.get(x, ()):
            if y not in prev:
                prev[y] = (x, e)
                stack.append(y)
    out = [t]
    while prev[out[-1]] is not None:
        x, e = prev[out[-1]]
        out.extend([e, x])
    return out[::-1]


# --- moves -----------------------------------------------------------------------------

def _rebuild(P: Picture, rotation: dict, pairing: dict, *, direction=None, hE=None, a=None,
             hV=None, k=None, isolated=None) -> Picture:
    """New picture from edited rotations; vertices left without darts become isolated."""
    direction = dict(P.direction if direction is None else direction)
    hE = dict(P.hE if hE is None else hE)
    a = dict(P.a if a is None else a)
    hV = dict(P.hV if hV is None else hV)
    k = dict(P.k if k is None else k)
    isolated = list(P.isolated if isolated is None else isolated)
    rot = {}
    for v, ds in rotation.items():
        if ds:
            rot[v] = tuple(ds)
        elif v not in isolated:
            isolated.append(v)
    M = CombinatorialMap(rot, pairing) if rot else None
    live = set(M.edges) if M else set()

    def keep(lbl):
        return {e: x for e, x in lbl.items() if e in live}
    return Picture(P.system, M, keep(direction), hV, keep(hE), keep(a), k, tuple(isolated))


def _delete_edge(P: Picture, e: int) -> Picture:
    M = P.map
    d1, d2 = M.edge_darts(e)
    rotation = {v: [d for d in ds if d not in (d1, d2)] for v, ds in M.rotation.items()}
    pairing = {d: x for d, x in M.pairing.items() if d not in (d1, d2)}
    return _rebuild(P, rotation, pairing)


def _contract(P: Picture, v, w, face: Sequence[int]) -> Picture:
    M = P.map
    dv = min(d for d in face if M.origin[d] == v)
    dw = min(d for d in face if M.origin[d] == w)

    def from_corner(d):
        ds = M.rotation[M.origin[d]]
        i = ds.index(d)
        return list(ds[i:] + ds[:i])

    rotation = {u: list(ds) for u, ds in M.rotation.items() if u not in (v, w)}
    rotation[v] = from_corner(dv) + from_corner(dw)
    hV = {u: x for u, x in P.hV.items() if u != w}
    k = {u: x for u, x in P.k.items() if u != w}
    k[v] = P.system.p.reduce(P.k[v] + P.k[w])
    # keep v's slot in iteration order
    rotation = {u: rotation[u] for u in M.rotation if u != w}
    return _rebuild(P, rotation, dict(M.pairing), hV=hV, k=k)


def _remove_isolated(P: Picture, v) -> Picture:
    if not P.system.p.is_zero(P.k[v]):
        raise MoveNotApplicable(f"isolated vertex {v} has k = {P.k[v]} != 0")
    return replace(P, hV={u: x for u, x in P.hV.items() if u != v},
                   k={u: x for u, x in P.k.items() if u != v},
                   isolated=tuple(u for u in P.isolated if u != v))


def _smooth_vertex(P: Picture, v) -> Picture:
    """Delete a degree 2 or 3 vertex whose edges share one label (and cancel)."""
    M, p = P.map, P.system.p
    ds = list(M.rotation[v])
    if len(ds) not in (2, 3):
        raise MoveNotApplicable(f"vertex {v} has degree {len(ds)}")
    es = [M.edge_of(d) for d in ds]
    if any(M.is_loop(e) for e in es):
        raise MoveNotApplicable(f"vertex {v} carries a loop")
    labels = {P.hE[e] for e in es}
    if len(labels) != 1:
        raise MoveNotApplicable(f"edges at {v} carry labels {sorted(labels)}")
    incoming = [P.signed_value(d) for d in ds]  # values after orienting every edge into v
    if not p.is_zero(sum(incoming)) or not p.is_zero(P.k[v]):
        raise MoveNotApplicable(f"vertex {v}: incoming sum {sum(incoming)} or k = {P.k[v]} is non-zero")
    j = labels.pop()
    far = [M.pairing[d] for d in ds]  # dart at the other end of each edge
    rotation = {u: list(x) for u, x in M.rotation.items() if u != v}
    pairing = {d: x for d, x in M.pairing.items() if d not in ds}
    direction = {e: x for e, x in P.direction.items() if e not in es}
    hE = {e: x for e, x in P.hE.items() if e not in es}
    a = {e: x for e, x in P.a.items() if e not in es}
    hV = {u: x for u, x in P.hV.items() if u != v}
    k = {u: x for u, x in P.k.items() if u != v}
    if len(ds) == 2:
        y1, y2 = far
        pairing[y1], pairing[y2] = y2, y1
        e = min(y1, y2)
        direction[e] = y1
        hE[e] = j
        a[e] = incoming[0]
    else:
        # rotation at v is (x3, x1, x2): f1 = e1 -> e3 and f2 = e2 -> e3
        start = ds.index(min(ds))
        x3, x1, x2 = ds[start:] + ds[:start]
        y1, y2, y3 = M.pairing[x1], M.pairing[x2], M.pairing[x3]
        s1, s2 = P.signed_value(x1), P.signed_value(x2)
        z1 = max(M.pairing) + 1
        z2 = z1 + 1
        u3 = M.origin[y3]
        r = rotation[u3]
        i = r.index(y3)
        rotation[u3] = r[:i] + [z1, z2] + r[i + 1:]
        del pairing[y3]
        pairing.update({y1: z1, z1: y1, y2: z2, z2: y2})
        for y, z, s in ((y1, z1, s1), (y2, z2, s2)):
            e = min(y, z)
            direction[e] = y
            hE[e] = j
            a[e] = s
    return _rebuild(P, rotation, pairing, direction=direction, hE=hE, a=a, hV=hV, k=k)


def _delete_cycle_edge(P: Picture, cyc: Sequence) -> Picture:
    """Delete the closing edge of a one-label cycle and push its value onto the rest."""
    M, p = P.map, P.system.p
    vs, es = list(cyc[0:-1:2]), list(cyc[1::2])
    if len({P.hE[e] for e in es}) != 1:
        raise MoveNotApplicable("cycle edges carry different labels")
    ek = es[-1]
    v1 = vs[0]
    # value of ek oriented from v1 towards vk
    ak = P.a[ek] if P.source(ek) == v1 else -P.a[ek]
    a = dict(P.a)
    for i, e in enumerate(es[:-1]):
        forward = P.source(e) == vs[i] and P.target(e) == vs[i + 1]
        a[e] = p.reduce(a[e] + ak if forward else a[e] - ak)
    d1, d2 = M.edge_darts(ek)
    rotation = {v: [d for d in ds if d not in (d1, d2)] for v, ds in M.rotation.items()}
    pairing = {d: x for d, x in M.pairing.items() if d not in (d1, d2)}
    return _rebuild(P, rotation, pairing, a=a)


def apply_move(P: Picture, v: Violation) -> Picture:
    """Apply the reduction move for a witness; the result is a smaller picture
    of the same phase.  Raises :class:`MoveNotApplicable` when a precondition fails."""
    kind = v.kind
    if kind is Kind.LOOP:
        (e,) = v.witness
        if not P.map.is_loop(e):
            raise MoveNotApplicable(f"edge {e} is not a loop")
        return _delete_edge(P, e)
    if kind is Kind.ZERO_EDGE:
        (e,) = v.witness
        if not P.system.p.is_zero(P.a[e]):
            raise MoveNotApplicable(f"edge {e} has non-zero a")
        return _delete_edge(P, e)
    if kind is Kind.SAME_LABEL_FACE_PAIR:
        x, y, face = v.witness
        if x == y or P.hV[x] != P.hV[y]:
            raise MoveNotApplicable("vertices differ in label or coincide")
        origins = {P.map.origin[d] for d in face}
        if x not in origins or y not in origins:
            raise MoveNotApplicable("vertices are not on the given face")
        return _contract(P, x, y, face)
    if kind is Kind.LOW_DEGREE:
        (x,) = v.witness
        if P.degree(x) == 0:
            return _remove_isolated(P, x)
        return _smooth_vertex(P, x)
    if kind is Kind.MONO_CYCLE:
        return _delete_cycle_edge(P, v.witness)
    raise MoveNotApplicable(f"no move for {kind}")


class Outcome(str, enum.Enum):
    EMPTY = "EMPTY"
    STUCK = "STUCK"


@dataclass
class Step:
    kind: Kind
    witness: tuple
    size_after: int


@dataclass
class ReductionTrace:
    outcome: Outcome
    steps: list = field(default_factory=list)
    final: Optional[Picture] = None
    blocked: list = field(default_factory=list)  # witnesses whose move was inapplicable

    def to_json(self) -> dict:
        return {"outcome": self.outcome.value,
                "steps": [{"kind": s.kind.value, "size_after": s.size_after} for s in self.steps],
                "final_size": self.final.size if self.final else 0,
                "blocked": [{"kind": v.kind.value, "detail": v.detail} for v in self.blocked]}


def reduce(P: Picture, check: bool = False) -> ReductionTrace:
    """Repeatedly apply the first applicable move until the picture is empty
    or no move applies.  With ``check=True`` every intermediate picture is
    re-verified and compared against the original phase."""
    if verify(P):
        raise InvalidPicture(verify(P))
    start_phase = phase(P)
    steps = []
    while P.size:
        for v in [u for u in P.isolated if P.system.p.is_zero(P.k[u])]:
            P = _remove_isolated(P, v)
            steps.append(Step(Kind.LOW_DEGREE, (v,), P.size))
        if not P.size:
            break
        blocked = []
        for v in iter_violations(P):
            try:
                Q = apply_move(P, v)
            except MoveNotApplicable:
                blocked.append(v)
                continue
            if Q.size >= P.size:
                raise AssertionError(f"move {v.kind} did not shrink the picture")
            if check:
                bad = verify(Q)
                if bad or phase(Q) != start_phase:
                    raise AssertionError(f"move {v.kind} broke the picture: {bad}")
            steps.append(Step(v.kind, v.witness, Q.size))
            P = Q
            break
        else:
            return ReductionTrace(Outcome.STUCK, steps, P, blocked)
    return ReductionTrace(Outcome.EMPTY, steps, P)
