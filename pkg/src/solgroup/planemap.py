"""Combinatorial maps (rotation systems) for plane embeddings.

A map is a set of darts (half-edges) with a fixed-point-free involution
pairing the two darts of each edge, and for each vertex the
counterclockwise cyclic order of the darts leaving it.  Faces are the
orbits of ``phi(d) = sigma(alpha(d))``, where ``alpha`` is the pairing and
``sigma`` moves to the next dart counterclockwise around its origin.

An edge is named by the smaller of its two dart ids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Sequence


class MapError(ValueError):
    pass


class NotPlanarError(MapError):
    pass


@dataclass(frozen=True)
class CombinatorialMap:
    rotation: Mapping[Hashable, tuple]
    pairing: Mapping[int, int]
    origin: Mapping[int, Hashable] = field(init=False, repr=False, compare=False)
    _succ: Mapping[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rot = {v: tuple(ds) for v, ds in self.rotation.items()}
        pairing = dict(self.pairing)
        origin, succ = {}, {}
        for v, ds in rot.items():
            if not ds:
                raise MapError(f"isolated vertex {v!r}: remove it before building a map")
            for i, d in enumerate(ds):
                if d in origin:
                    raise MapError(f"dart {d} appears in more than one rotation")
                origin[d] = v
                succ[d] = ds[(i + 1) % len(ds)]
        if set(pairing) != set(origin):
            raise MapError("pairing and rotations cover different dart sets")
        for d, e in pairing.items():
            if d == e or pairing.get(e) != d:
                raise MapError(f"pairing is not a fixed-point-free involution at dart {d}")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "pairing", pairing)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "_succ", succ)

    # -- basic queries -------------------------------------------------------
    @property
    def darts(self) -> list[int]:
        return sorted(self.pairing)

    @property
    def vertices(self) -> list:
        return list(self.rotation)

    @property
    def edges(self) -> list[int]:
        return sorted(d for d, e in self.pairing.items() if d < e)

    def edge_of(self, d: int) -> int:
        return min(d, self.pairing[d])

    def edge_darts(self, e: int) -> tuple[int, int]:
        return e, self.pairing[e]

    def ends(self, e: int) -> tuple:
        return self.origin[e], self.origin[self.pairing[e]]

    def degree(self, v) -> int:
        return len(self.rotation[v])

    def is_loop(self, e: int) -> bool:
        a, b = self.ends(e)
        return a == b

    def succ(self, d: int) -> int:
        return self._succ[d]

    def pred(self, d: int) -> int:
        ds = self.rotation[self.origin[d]]
        return ds[ds.index(d) - 1]

    def face_step(self, d: int) -> int:
        return self._succ[self.pairing[d]]

    def components(self) -> list[list]:
        """Vertex sets of the connected components, in first-seen order."""
        parent = {v: v for v in self.rotation}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            a, b = (find(x) for x in self.ends(e))
            if a != b:
                parent[b] = a
        groups: dict = {}
        for v in self.rotation:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def to_json(self) -> dict:
        return {
            "darts": self.darts,
            "pairing": [[e, self.pairing[e]] for e in self.edges],
            "rotation": {str(v): list(ds) for v, ds in self.rotation.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "CombinatorialMap":
        pairing = {}
        for a, b in data["pairing"]:
            pairing[int(a)] = int(b)
            pairing[int(b)] = int(a)
        rot = {v: tuple(int(d) for d in ds) for v, ds in data["rotation"].items()}
        if "darts" in data and sorted(int(d) for d in data["darts"]) != sorted(pairing):
            raise MapError("'darts' disagrees with 'pairing'")
        return cls(rot, pairing)


@dataclass(frozen=True)
class FaceTrace:
    faces: tuple  # tuple of dart cycles, each starting at its smallest dart

    def face_of(self, d: int) -> int:
        for i, f in enumerate(self.faces):
            if d in f:
                return i
        raise KeyError(d)

    def __len__(self):
        return len(self.faces)


def trace_faces(M: CombinatorialMap) -> FaceTrace:
    seen = set()
    faces = []
    for d in M.darts:
        if d in seen:
            continue
        cyc = []
        x = d
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = M.face_step(x)
        faces.append(tuple(cyc))
    return FaceTrace(tuple(faces))


def euler_characteristics(M: CombinatorialMap) -> list[tuple[int, int, int]]:
    """(V, E, F) for every connected component."""
    faces = trace_faces(M).faces
    out = []
    for comp in M.components():
        cs = set(comp)
        E = sum(1 for e in M.edges if M.origin[e] in cs)
        F = sum(1 for f in faces if M.origin[f[0]] in cs)
        out.append((len(comp), E, F))
    return out


def check_planar_embedding(M: CombinatorialMap) -> bool:
    """True iff every component satisfies V - E + F = 2."""
    return all(v - e + f == 2 for v, e, f in euler_characteristics(M))


def face_size(M: CombinatorialMap, face: Sequence[int], trace: Optional[FaceTrace] = None) -> int:
    """Number of darts on the face: edges seen from two faces count once, bridges twice."""
    trace = trace or trace_faces(M)
    if not face or face[0] not in M.pairing:
        raise MapError("face is not part of this map")
    real = trace.faces[trace.face_of(face[0])]
    if set(real) != set(face):
        raise MapError("face is not part of this map")
    return len(real)


def face_vertices(M: CombinatorialMap, face: Sequence[int]) -> list:
    return [M.origin[d] for d in face]


def boundary_simple_cycle(M: CombinatorialMap, face: Sequence[int]) -> Optional[tuple]:
    """A simple cycle ``(v1, e1, ..., vk, ek, v1)`` on the boundary of ``face``.

    Edges lying on just one face are dropped, the face is re-traced from
    one of its remaining darts, and the first closing vertex repetition of
    minimal span gives the cycle.  Returns None when the face's component
    has a single face (a tree).
    """
    if any(M.is_loop(e) for e in M.edges):
        raise MapError("boundary_simple_cycle needs a loopless map")
    trace = trace_faces(M)
    fid = trace.face_of(face[0])
    if set(trace.faces[fid]) != set(face):
        raise MapError("face is not part of this map")
    face_index = {d: i for i, f in enumerate(trace.faces) for d in f}
    single = {d for d in M.darts if face_index[d] == face_index[M.pairing[d]]}
    kept = [d for d in trace.faces[fid] if d not in single]
    if not kept:
        return None
    # face step in the reduced map: skip deleted darts in the rotation
    def succ_kept(d):
        x = M.succ(d)
        while x in single:
            x = M.succ(x)
        return x

    walk = []
    x = min(kept)
    while True:
        walk.append(x)
        x = succ_kept(M.pairing[x])
        if x == walk[0]:
            break
    verts = [M.origin[d] for d in walk]
    k = len(walk)
    best = None
    for i in range(k):
        for j in range(i + 1, k + 1):
            if verts[j % k] == verts[i]:
                if best is None or j - i < best[1] - best[0]:
                    best = (i, j)
                break
    i, j = best
    out = []
    for t in range(i, j):
        out.append(verts[t])
        out.append(M.edge_of(walk[t]))
    out.append(verts[i])
    return tuple(out)


def is_simple_cycle(M: CombinatorialMap, cyc: Sequence) -> bool:
    if len(cyc) < 5 or len(cyc) % 2 == 0 or cyc[0] != cyc[-1]:
        return False
    vs, es = list(cyc[0:-1:2]), list(cyc[1::2])
    if len(set(vs)) != len(vs) or len(set(es)) != len(es):
        return False
    for i, e in enumerate(es):
        if e not in M.pairing or {vs[i], cyc[2 * i + 2]} != set(M.ends(e)):
            return False
    return True


@dataclass(frozen=True)
class SCWitness:
    kind: str  # "vertex" or "face"
    item: object  # vertex id, or the face's dart cycle
    value: int  # its degree / size


class SmallCancellationContradiction(RuntimeError):
    pass


SC_PAIRS = ((6, 3), (4, 4), (3, 6))


def sc_witness(M: CombinatorialMap, pair: tuple[int, int]) -> SCWitness:
    """A vertex of degree < a or a face of size < b; one always exists on a plane map."""
    a, b = pair
    if (a, b) not in SC_PAIRS:
        raise ValueError(f"pair must be one of {SC_PAIRS}")
    if not M.rotation:
        raise MapError("empty map")
    if not check_planar_embedding(M):
        raise NotPlanarError("sc_witness needs a plane map")
    for v in sorted(M.rotation, key=str):
        if M.degree(v) < a:
            return SCWitness("vertex", v, M.degree(v))
    for f in trace_faces(M).faces:
        if len(f) < b:
            return SCWitness("face", f, len(f))
    raise SmallCancellationContradiction(
        f"every vertex has degree >= {a} and every face size >= {b} on a plane map")


# --- constructors -------------------------------------------------------------

def from_neighbor_rotation(rotation: Mapping[Hashable, Sequence[Hashable]]) -> tuple[CombinatorialMap, dict]:
    """Build a map of a simple graph from counterclockwise neighbour lists.

    Returns the map and ``{(u, v): dart}`` giving the dart from u towards v.
    """
    dart_of = {}
    nxt = 0
    for u in rotation:
        for v in rotation[u]:
            if (u, v) in dart_of:
                raise MapError(f"repeated neighbour {v!r} at {u!r}")
            dart_of[(u, v)] = nxt
            nxt += 1
    pairing = {}
    for (u, v), d in dart_of.items():
        if (v, u) not in dart_of:
            raise MapError(f"{u!r} lists {v!r} but not conversely")
        pairing[d] = dart_of[(v, u)]
    rot = {u: tuple(dart_of[(u, v)] for v in rotation[u]) for u in rotation}
    return CombinatorialMap(rot, pairing), dart_of


def from_straight_line_drawing(pos: Mapping[Hashable, tuple[float, float]],
                               edges: Iterable[tuple[Hashable, Hashable]]) -> tuple[CombinatorialMap, dict]:
    """Rotation system of a straight-line drawing (simple graphs only)."""
    nbrs: dict = {v: [] for v in pos}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rot = {}
    for u, ns in nbrs.items():
        x0, y0 = pos[u]
        rot[u] = sorted(ns, key=lambda w: math.atan2(pos[w][1] - y0, pos[w][0] - x0) % (2 * math.pi))
    rot = {u: ns for u, ns in rot.items() if ns}
    return from_neighbor_rotation(rot)


def renumber(M: CombinatorialMap) -> CombinatorialMap:
    """Relabel darts as 0..2E-1 in rotation order."""
    new = {}
    for v in M.rotation:
        for d in M.rotation[v]:
            new[d] = len(new)
    return CombinatorialMap({v: tuple(new[d] for d in ds) for v, ds in M.rotation.items()},
                            {new[d]: new[e] for d, e in M.pairing.items()})
